//! Acceptance suite: one pass/fail line per criterion, exact arithmetic
//! throughout. Runs without the test harness so the lines print in order.

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use koszul_core::algebra::{GradedModule, ModuleSide, PresentationFile, QuadraticAlgebra, QuadraticPresentation};
use koszul_core::commands::{self, FsplitArgs, GrassmannianArgs, Method, Settings, SplittingSource};
use koszul_core::flag::{
    realize_graded_dim, schubert_module, schubert_quotient_presentation, weyl_dim_rectangular, Grassmannian,
    PlueckerIndex, SchubertSpec,
};
use koszul_core::fsplit::{
    closure_property_check, compatibility_check, frobenius_section_check, is_splitting, schubert_chart_data,
    CharPPolynomial, ChartCase, ChartIdeal, SplittingCandidate,
};
use koszul_core::koszul::{
    check_agreement, corpus_seeds, koszul_lattice_test, koszul_module_lattice_test, module_tor, pair_tor,
    random_presentation, random_presentation_with, tor_table, RandomStyle, TorEngine, DEFAULT_CAP,
};
use koszul_core::{Field, PrimeField, Rationals, Result};

const CAP: usize = DEFAULT_CAP;

struct Line {
    ok: bool,
    detail: String,
}

fn line(ok: bool, detail: impl Into<String>) -> Line {
    Line { ok, detail: detail.into() }
}

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn gf() -> PrimeField {
    PrimeField::new(32003).unwrap()
}

fn secs(d: Duration) -> String {
    format!("{:.1}s", d.as_secs_f64())
}

// 1 ------------------------------------------------------------------------

fn three_way<F: Field>(k: usize, n: usize, top: usize, field: F) -> Result<(bool, Vec<usize>)> {
    let gr = Grassmannian::new(k, n, field.clone())?;
    let pres = QuadraticAlgebra::new(gr.presentation)?.hilbert_series(top)?.dims;
    let mut ok = true;
    for (m, &d) in pres.iter().enumerate() {
        ok &= realize_graded_dim(k, n, m, &field)? == d;
        ok &= weyl_dim_rectangular(k, n, m)? as usize == d;
    }
    Ok((ok, pres))
}

fn criterion_1() -> Result<Line> {
    let t = Instant::now();
    let (a, dims) = three_way(2, 4, 4, gf())?;
    let (b, dims_q) = three_way(2, 4, 4, Rationals)?;
    let (c, dims25) = three_way(2, 5, 3, gf())?;
    // relations beyond the commutators: one for Gr(2,4), five for Gr(2,5)
    let mut plucker = Vec::new();
    for (k, n) in [(2, 4), (2, 5), (1, 4)] {
        let p = Grassmannian::new(k, n, gf())?.presentation;
        let g = p.num_generators();
        plucker.push(p.relations().dim() - g * (g - 1) / 2);
    }
    let expected = vec![1, 6, 20, 50, 105];
    let elapsed = t.elapsed();
    let ok = a
        && b
        && c
        && dims == expected
        && dims_q == expected
        && plucker == [1, 5, 0]
        && elapsed < Duration::from_secs(120);
    Ok(line(
        ok,
        format!(
            "Gr(2,4) {dims:?} over GF(32003) and Q, Gr(2,5) {dims25:?}, quadratic relations past commutators {plucker:?}, {}",
            secs(elapsed)
        ),
    ))
}

// 2 ------------------------------------------------------------------------

fn algebra_passes<F: Field>(p: &QuadraticPresentation<F>, n: usize, i: usize, j: usize) -> Result<(bool, usize)> {
    let lattice = koszul_lattice_test(p, n, CAP)?;
    let closure = lattice.iter().map(|v| v.max_closure).max().unwrap_or(0);
    let (tor, _) = tor_table(p, i, j, TorEngine::Auto)?;
    Ok((lattice.iter().all(|v| v.distributive) && tor.is_diagonal(0), closure))
}

fn criterion_2() -> Result<Line> {
    let t = Instant::now();
    let mut ok = true;
    let mut parts = Vec::new();
    for (k, n) in [(2, 4), (2, 5), (1, 4)] {
        let p = Grassmannian::new(k, n, gf())?.presentation;
        let (pass, closure) = algebra_passes(&p, 4, 4, 6)?;
        ok &= pass;
        parts.push(format!("Gr({k},{n}) {} (max block closure {closure})", if pass { "ok" } else { "FAILED" }));
    }
    let elapsed = t.elapsed();
    ok &= elapsed < Duration::from_secs(600);
    Ok(line(ok, format!("{}, {}", parts.join(", "), secs(elapsed))))
}

// 3 and 5 ------------------------------------------------------------------

struct SchubertOutcome {
    label: String,
    module: bool,
    quotient: bool,
    dims_match: bool,
}

fn schubert_case<F: Field>(gr: &Grassmannian<F>, spec: &SchubertSpec) -> Result<SchubertOutcome> {
    let side = match spec.side {
        koszul_core::flag::SchubertSide::Standard => ModuleSide::Right,
        koszul_core::flag::SchubertSide::Opposite => ModuleSide::Left,
    };
    let m = schubert_module(gr, spec, side)?;
    let q = schubert_quotient_presentation(gr, spec)?;
    let module_lattice = koszul_module_lattice_test(&m, 4, CAP)?.iter().all(|v| v.distributive);
    let (mt, _) = module_tor(&m, 3, 5, TorEngine::Auto)?;
    let (quotient, _) = algebra_passes(&q, 4, 3, 5)?;
    let a = Arc::new(QuadraticAlgebra::new(gr.presentation.clone())?);
    let mdims = GradedModule::new(a, m)?.hilbert_series(5)?.dims;
    let qdims = QuadraticAlgebra::new(q)?.hilbert_series(5)?.dims;
    Ok(SchubertOutcome {
        label: spec.to_string(),
        module: module_lattice && mt.is_diagonal(0),
        quotient,
        dims_match: mdims == qdims,
    })
}

fn schubert_family(k: usize, n: usize, opposite: bool) -> Result<Vec<SchubertOutcome>> {
    let gr = Grassmannian::new(k, n, gf())?;
    gr.subsets
        .iter()
        .map(|w| {
            let spec = if opposite { SchubertSpec::opposite(w.clone()) } else { SchubertSpec::standard(w.clone()) };
            schubert_case(&gr, &spec)
        })
        .collect()
}

fn criterion_3(standard: &[SchubertOutcome]) -> Line {
    let ok = standard.len() == 6 && standard.iter().all(|o| o.module && o.quotient && o.dims_match);
    let bad: Vec<&str> =
        standard.iter().filter(|o| !(o.module && o.quotient && o.dims_match)).map(|o| o.label.as_str()).collect();
    line(ok, format!("{} Schubert specs on Gr(2,4), failures: {bad:?}", standard.len()))
}

fn criterion_5(ambient: &[(String, bool)], families: &[(&str, &[SchubertOutcome])]) -> Line {
    let mut instances = 0;
    let mut violations = Vec::new();
    for (gr, outcomes) in families {
        let a_passes = ambient.iter().find(|(l, _)| l == gr).is_some_and(|(_, ok)| *ok);
        for o in *outcomes {
            if a_passes && o.module {
                instances += 1;
                if !o.quotient {
                    violations.push(format!("{gr} {}", o.label));
                }
            }
        }
    }
    line(violations.is_empty() && instances > 0, format!("{instances} instances with A and B_w passing, violations: {violations:?}"))
}

// 4 ------------------------------------------------------------------------

fn criterion_4() -> Result<Line> {
    let gr = Grassmannian::new(2, 4, gf())?;
    let mut pairs = 0;
    let mut bad = Vec::new();
    for w in &gr.subsets {
        for v in &gr.subsets {
            let m = schubert_module(&gr, &SchubertSpec::standard(w.clone()), ModuleSide::Right)?;
            let n = schubert_module(&gr, &SchubertSpec::opposite(v.clone()), ModuleSide::Left)?;
            let (t, _) = pair_tor(&m, &n, 3, 5, TorEngine::Auto)?;
            pairs += 1;
            if !t.is_diagonal(1) {
                bad.push(format!("({w},{v})"));
            }
        }
    }
    Ok(line(pairs >= 4 && bad.is_empty(), format!("{pairs} pairs (B_w, B⁻_v), off-diagonal: {bad:?}")))
}

// 6 ------------------------------------------------------------------------

fn criterion_6() -> Result<Line> {
    let mut random_ok = 0;
    let seeds = corpus_seeds(1, 60);
    for &s in &seeds {
        let inst = random_presentation(s, 3)?;
        let a = check_agreement(&inst.presentation, 4, CAP, TorEngine::Auto)?;
        if a.agree && a.low_degree_sanity {
            random_ok += 1;
        }
    }
    let f = gf();
    let mut structured: Vec<QuadraticPresentation<PrimeField>> = vec![
        QuadraticPresentation::polynomial_ring(f, 2),
        QuadraticPresentation::free(f, 2),
        QuadraticPresentation::monomial(f, 3, &[(0, 1), (1, 2), (2, 0)])?,
    ];
    for (k, n) in [(2, 4), (2, 5), (1, 4)] {
        structured.push(Grassmannian::new(k, n, f)?.presentation);
    }
    let g24 = Grassmannian::new(2, 4, f)?;
    for w in &g24.subsets {
        structured.push(schubert_quotient_presentation(&g24, &SchubertSpec::standard(w.clone()))?);
        structured.push(schubert_quotient_presentation(&g24, &SchubertSpec::opposite(w.clone()))?);
    }
    let mut structured_ok = 0;
    for p in &structured {
        let a = check_agreement(p, 4, CAP, TorEngine::Auto)?;
        if a.agree && a.low_degree_sanity {
            structured_ok += 1;
        }
    }
    // the recorded witness: regenerate from its seed and compare to the file
    let file = PresentationFile::load(&data("non_koszul_witness.toml"))?;
    let recorded = file.build(f)?;
    let regenerated = random_presentation_with(0, 3, 3, RandomStyle::Sparse)?.presentation;
    let w = check_agreement(&recorded, 4, CAP, TorEngine::Auto)?;
    let witness_ok = recorded.relations() == regenerated.relations()
        && w.agree
        && w.lattice_first_failure.is_some()
        && w.tor_first_off_diagonal == w.lattice_first_failure;
    let ok = random_ok == seeds.len() && structured_ok == structured.len() && witness_ok;
    Ok(line(
        ok,
        format!(
            "random {random_ok}/{}, structured {structured_ok}/{}, witness first failure lattice {:?} tor {:?}",
            seeds.len(),
            structured.len(),
            w.lattice_first_failure,
            w.tor_first_off_diagonal
        ),
    ))
}

// 7 ------------------------------------------------------------------------

fn ideal(f: PrimeField, vars: &[String], label: &str, gens: &[&str]) -> Result<ChartIdeal> {
    let gens = gens.iter().map(|g| CharPPolynomial::parse_in(f, vars, g)).collect::<Result<Vec<_>>>()?;
    ChartIdeal::new(label, gens)
}

fn closure_all(c: &SplittingCandidate, ideals: &[ChartIdeal], bound: u32) -> Result<(usize, usize)> {
    let mut tested = 0;
    let mut held = 0;
    for (x, a) in ideals.iter().enumerate() {
        for b in &ideals[x..] {
            let r = closure_property_check(c, a, b, bound)?;
            if r.preconditions_hold {
                tested += 1;
                held += r.holds() as usize;
            }
        }
    }
    Ok((tested, held))
}

fn criterion_7() -> Result<Line> {
    let mut ok = true;
    let mut pairs = (0, 0);
    for p in [2u32, 3, 5, 7] {
        let f = PrimeField::new(p)?;
        let chart = schubert_chart_data(ChartCase::P1, f)?;
        let s = chart.candidate()?;
        ok &= is_splitting(&s);
        ok &= frobenius_section_check(&s, 15).is_none();
        ok &= compatibility_check(&s, &chart.ideals[0], 50)?.compatible;
        let (t, h) = closure_all(&s, &chart.ideals, 12)?;
        pairs = (pairs.0 + t, pairs.1 + h);
        let vars: Vec<String> = ["x", "y"].iter().map(|v| v.to_string()).collect();
        let xy = SplittingCandidate::new(CharPPolynomial::parse_in(f, &vars, "x y")?)?;
        ok &= is_splitting(&xy) && frobenius_section_check(&xy, 15).is_none();
        let ideals = [
            ideal(f, &vars, "(x)", &["x"])?,
            ideal(f, &vars, "(y)", &["y"])?,
            ideal(f, &vars, "(x,y)", &["x", "y"])?,
        ];
        let (t, h) = closure_all(&xy, &ideals, 12)?;
        pairs = (pairs.0 + t, pairs.1 + h);
    }
    let mut gr_ideals = 0;
    for p in [2u32, 3] {
        let f = PrimeField::new(p)?;
        let chart = schubert_chart_data(ChartCase::Gr24BigCell, f)?;
        let s = chart.candidate()?;
        ok &= is_splitting(&s) && frobenius_section_check(&s, 15).is_none();
        for i in &chart.ideals {
            ok &= compatibility_check(&s, i, 8)?.compatible;
            gr_ideals += 1;
        }
        let (t, h) = closure_all(&s, &chart.ideals, 12)?;
        pairs = (pairs.0 + t, pairs.1 + h);
    }
    ok &= pairs.0 > 0 && pairs.0 == pairs.1;
    Ok(line(
        ok,
        format!("P1 and xy charts for p in 2,3,5,7; Gr(2,4) chart {gr_ideals} ideal checks; closure {}/{} pairs", pairs.1, pairs.0),
    ))
}

// 8 ------------------------------------------------------------------------

fn criterion_8() -> Line {
    let settings = |argv: &[&str]| {
        let mut s = Settings::new(argv.iter().map(|a| a.to_string()).collect());
        s.cap = CAP;
        s
    };
    let runs: Vec<Box<dyn Fn() -> koszul_core::report::RunReport>> = vec![
        Box::new(move || commands::check_koszul(&settings(&["check-koszul"]), &data("plane.toml"), Method::Both)),
        Box::new(move || {
            commands::check_koszul(&settings(&["check-koszul"]), &data("non_koszul_witness.toml"), Method::Both)
        }),
        Box::new(move || {
            let args = GrassmannianArgs {
                k: 2,
                n: 4,
                schubert: Some(SchubertSpec::standard(PlueckerIndex::new(vec![1, 3], 4).unwrap())),
                tor_degree: Some(4),
                emit: None,
            };
            let mut s = settings(&["grassmannian"]);
            s.max_degree = Some(3);
            commands::grassmannian(&s, &args)
        }),
        Box::new(move || {
            let args = FsplitArgs {
                source: SplittingSource::Case(ChartCase::Gr24BigCell),
                p: Some(2),
                ideals: vec![],
                section_degree: 15,
                closure: true,
            };
            let mut s = settings(&["fsplit"]);
            s.max_degree = Some(8);
            commands::fsplit(&s, &args)
        }),
        Box::new(move || commands::corpus(&settings(&["corpus"]), 1, 20, 3)),
    ];
    let mut identical = 0;
    for run in &runs {
        let a = run().without_timing().to_json();
        let b = run().without_timing().to_json();
        identical += (a == b) as usize;
    }
    line(identical == runs.len(), format!("{identical}/{} commands byte-identical across reruns", runs.len()))
}

fn main() -> ExitCode {
    let started = Instant::now();
    let mut all = true;
    let mut report = |n: usize, name: &str, r: Result<Line>| {
        let (ok, detail) = match r {
            Ok(l) => (l.ok, l.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        all &= ok;
        println!("criterion {n} [{}] {name}: {detail}", if ok { "PASS" } else { "FAIL" });
    };
    report(1, "quadraticity dimensions", criterion_1());
    report(2, "Grassmannian algebras are Koszul", criterion_2());
    let families = (|| -> Result<_> {
        let g24 = schubert_family(2, 4, false)?;
        let g24_op = schubert_family(2, 4, true)?;
        let g14 = schubert_family(1, 4, false)?;
        let g14_op = schubert_family(1, 4, true)?;
        let mut ambient = Vec::new();
        for (k, n) in [(2, 4), (1, 4)] {
            let p = Grassmannian::new(k, n, gf())?.presentation;
            ambient.push((format!("Gr({k},{n})"), algebra_passes(&p, 4, 4, 6)?.0));
        }
        Ok((g24, g24_op, g14, g14_op, ambient))
    })();
    match families {
        Ok((g24, g24_op, g14, g14_op, ambient)) => {
            report(3, "Schubert modules and quotients", Ok(criterion_3(&g24)));
            report(4, "Schubert pairs", criterion_4());
            let fams: [(&str, &[SchubertOutcome]); 4] =
                [("Gr(2,4)", &g24), ("Gr(2,4)", &g24_op), ("Gr(1,4)", &g14), ("Gr(1,4)", &g14_op)];
            report(5, "module-to-algebra implication", Ok(criterion_5(&ambient, &fams)));
        }
        Err(e) => {
            report(3, "Schubert modules and quotients", Err(e.clone()));
            report(4, "Schubert pairs", criterion_4());
            report(5, "module-to-algebra implication", Err(e));
        }
    }
    report(6, "lattice and Tor agreement", criterion_6());
    report(7, "Frobenius splittings on charts", criterion_7());
    report(8, "determinism", Ok(criterion_8()));
    println!("acceptance: {} in {}", if all { "all criteria pass" } else { "FAILURES" }, secs(started.elapsed()));
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
