//! The command verbs behind the CLI. Each returns a finished [`RunReport`];
//! the exit code is in its summary.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::Serialize;
use serde_json::json;

use crate::algebra::{GradedModule, ModuleFile, ModuleSide, PresentationFile, QuadraticAlgebra, QuadraticPresentation};
use crate::error::{Error, Result};
use crate::field::{Field, FieldSpec, PrimeField, Rationals};
use crate::flag::{realize_graded_dim, schubert_module, schubert_quotient_presentation, weyl_dim_rectangular, Grassmannian, SchubertSide, SchubertSpec};
use crate::fsplit::{
    closure_property_check, compatibility_check, frobenius_section_check, is_splitting, parse_polynomial_file,
    schubert_chart_data, ChartCase, ChartIdeal, CompatibilityReport, SplittingCandidate,
};
use crate::koszul::{
    check_agreement, corpus_seeds, koszul_lattice_test, koszul_module_lattice_test, module_tor, pair_tor,
    random_presentation, tor_table, Agreement, DegreeVerdict, TorEngine, TorTable, DEFAULT_CAP,
};
use crate::report::{Record, ReportBuilder, RunReport, Verdict};

/// Environment variable overriding the default lattice closure cap.
pub const CAP_ENV: &str = "KOSZUL_LATTICE_CAP";

/// `KOSZUL_LATTICE_CAP` if set to a positive integer, else the built-in cap.
pub fn default_cap() -> usize {
    std::env::var(CAP_ENV).ok().and_then(|v| v.trim().parse().ok()).filter(|&c| c > 0).unwrap_or(DEFAULT_CAP)
}

/// Flags shared by all verbs.
#[derive(Clone, Debug)]
pub struct Settings {
    pub command: Vec<String>,
    pub field: Option<FieldSpec>,
    pub max_degree: Option<usize>,
    pub cap: usize,
    pub engine: TorEngine,
}

impl Settings {
    pub fn new(command: Vec<String>) -> Self {
        Self { command, field: None, max_degree: None, cap: default_cap(), engine: TorEngine::Auto }
    }
}

macro_rules! with_field {
    ($spec:expr, $f:ident => $body:expr) => {
        match $spec {
            FieldSpec::Rationals => {
                let $f = Rationals;
                $body
            }
            FieldSpec::PrimeField(p) => {
                let $f = PrimeField::new(p)?;
                $body
            }
        }
    };
}

fn run(settings: &Settings, field: impl ToString, body: impl FnOnce(&mut ReportBuilder) -> Result<()>) -> RunReport {
    let mut b = ReportBuilder::new(settings.command.clone(), field);
    let out = body(&mut b);
    b.finish(out.as_ref().err())
}

// ---------------------------------------------------------------------------
// records shared by several verbs

#[derive(Serialize)]
struct LatticeWitness {
    block_weight: Vec<i32>,
    block_dim: usize,
    indices: (usize, usize, usize),
    dims: (usize, usize, usize),
    lhs_dim: usize,
    rhs_dim: usize,
    rechecked: bool,
}

/// One record per degree of a lattice test.
pub fn lattice_records<F: Field>(test: &str, verdicts: &[DegreeVerdict<F>]) -> Result<Vec<Record>> {
    let mut out = Vec::new();
    for v in verdicts {
        let mut r = Record::new(test, Verdict::from_bool(v.distributive))
            .degree(v.degree)
            .with("blocks", v.blocks)
            .with("max_closure", v.max_closure)
            .with("total_closure", v.total_closure);
        if let Some(bw) = &v.witness {
            let w = &bw.witness;
            let (lhs, rhs) = w.sides()?;
            r = r.witness(LatticeWitness {
                block_weight: bw.weight.0.clone(),
                block_dim: bw.coordinates.len(),
                indices: w.indices,
                dims: (w.x.dim(), w.y.dim(), w.z.dim()),
                lhs_dim: lhs.dim(),
                rhs_dim: rhs.dim(),
                rechecked: lhs != rhs,
            });
        }
        out.push(r);
    }
    Ok(out)
}

/// One record per internal degree `j`: pass when every entry there with
/// `i ≥ min_i` sits on the diagonal.
pub fn tor_records(test: &str, table: &TorTable, engine: TorEngine, min_i: usize) -> Vec<Record> {
    (0..=table.j_max)
        .map(|j| {
            let entries: Vec<[usize; 3]> = table.nonzero().filter(|e| e.1 == j).map(|(i, j, d)| [i, j, d]).collect();
            let off: Vec<&[usize; 3]> = entries.iter().filter(|e| e[0] != e[1] && e[0] >= min_i).collect();
            let mut r = Record::new(test, Verdict::from_bool(off.is_empty()))
                .degree(j)
                .with("engine", engine)
                .with("i_max", table.i_max)
                .with("entries", &entries);
            if let Some(first) = off.first() {
                r = r.witness(json!({ "i": first[0], "j": first[1], "dim": first[2] }));
            }
            r
        })
        .collect()
}

fn push_all(b: &mut ReportBuilder, records: Vec<Record>) {
    for r in records {
        b.push(r);
    }
}

fn first_failure(records: &[Record]) -> Option<usize> {
    records.iter().filter(|r| r.verdict == Verdict::Fail).filter_map(|r| r.degree.as_ref()?.parse().ok()).min()
}

// ---------------------------------------------------------------------------
// check-koszul

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Lattice,
    Bar,
    Both,
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lattice" => Ok(Method::Lattice),
            "bar" | "tor" => Ok(Method::Bar),
            "both" => Ok(Method::Both),
            _ => Err(Error::Parse(format!("unknown method `{s}` (expected lattice, bar or both)"))),
        }
    }
}

fn koszul_checks<F: Field>(
    b: &mut ReportBuilder,
    p: &QuadraticPresentation<F>,
    n: usize,
    method: Method,
    settings: &Settings,
) -> Result<()> {
    let mut lattice_fail = None;
    let mut tor_fail = None;
    if method != Method::Bar {
        let recs = lattice_records("lattice", &koszul_lattice_test(p, n, settings.cap)?)?;
        lattice_fail = first_failure(&recs);
        push_all(b, recs);
    }
    if method != Method::Lattice {
        let (table, engine) = tor_table(p, n, n, settings.engine)?;
        let recs = tor_records("tor", &table, engine, 0);
        tor_fail = first_failure(&recs);
        push_all(b, recs);
    }
    if method == Method::Both {
        b.push(
            Record::new("agreement", Verdict::from_bool(lattice_fail == tor_fail))
                .with("lattice_first_failure", lattice_fail)
                .with("tor_first_failure", tor_fail),
        );
    }
    Ok(())
}

/// Lattice and/or Tor test of a presentation file through `max_degree`
/// (default 4).
pub fn check_koszul(settings: &Settings, path: &Path, method: Method) -> RunReport {
    run(settings, "", |b| {
        let text = b.input_file(path)?;
        let file = PresentationFile::parse(&text)?;
        let spec = match settings.field {
            Some(s) => s,
            None => file.field_spec()?,
        };
        b.set_field(spec);
        let n = settings.max_degree.unwrap_or(4);
        if n < 2 {
            return Err(Error::OutOfRange(format!("max degree must be at least 2, got {n}")));
        }
        b.mark();
        with_field!(spec, f => koszul_checks(b, &file.build(f)?, n, method, settings))
    })
}

// ---------------------------------------------------------------------------
// grassmannian

#[derive(Clone, Debug)]
pub struct GrassmannianArgs {
    pub k: usize,
    pub n: usize,
    pub schubert: Option<SchubertSpec>,
    /// Highest homological and internal degree for Tor; defaults to
    /// `max_degree`.
    pub tor_degree: Option<usize>,
    /// Directory receiving the presentation (and module) files.
    pub emit: Option<PathBuf>,
}

fn dims_record<F: Field>(gr: &Grassmannian<F>, n: usize) -> Result<Record> {
    let field = gr.presentation.field().clone();
    let pres = QuadraticAlgebra::new(gr.presentation.clone())?.hilbert_series(n)?.dims;
    let mut realized = Vec::new();
    for m in 0..=n {
        match realize_graded_dim(gr.k, gr.n, m, &field) {
            Ok(d) => realized.push(d),
            Err(e) if e.is_resource_limit() => break,
            Err(e) => return Err(e),
        }
    }
    let weyl: Vec<usize> =
        (0..=n).map(|m| Ok(weyl_dim_rectangular(gr.k, gr.n, m)? as usize)).collect::<Result<_>>()?;
    let ok = pres == weyl && realized.iter().zip(&pres).all(|(a, b)| a == b);
    Ok(Record::new("dims", Verdict::from_bool(ok))
        .degree(n)
        .with("presentation", &pres)
        .with("realized", &realized)
        .with("weyl", &weyl))
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Io { path: path.display().to_string(), message: e.to_string() })
}

fn grassmannian_checks<F: Field>(
    b: &mut ReportBuilder,
    field: F,
    args: &GrassmannianArgs,
    settings: &Settings,
) -> Result<()> {
    let n = settings.max_degree.unwrap_or(4);
    let t = args.tor_degree.unwrap_or(n);
    let gr = Grassmannian::new(args.k, args.n, field)?;
    let p = &gr.presentation;
    b.push(
        Record::new("presentation", Verdict::Info)
            .with("generators", p.num_generators())
            .with("relations", p.relations().dim()),
    );
    b.push(dims_record(&gr, n)?);
    if n >= 2 {
        push_all(b, lattice_records("lattice", &koszul_lattice_test(p, n, settings.cap)?)?);
    }
    let (table, engine) = tor_table(p, t, t, settings.engine)?;
    push_all(b, tor_records("tor", &table, engine, 0));
    let mut emitted = Vec::new();
    if let Some(dir) = &args.emit {
        std::fs::create_dir_all(dir).map_err(|e| Error::Io { path: dir.display().to_string(), message: e.to_string() })?;
        write_file(&dir.join("presentation.toml"), &PresentationFile::from_presentation(p).to_toml())?;
        emitted.push("presentation.toml".to_string());
    }
    if let Some(spec) = &args.schubert {
        let side = match spec.side {
            SchubertSide::Standard => ModuleSide::Right,
            SchubertSide::Opposite => ModuleSide::Left,
        };
        let module = schubert_module(&gr, spec, side)?;
        let quotient = schubert_quotient_presentation(&gr, spec)?;
        let label = spec.to_string();
        if n >= 2 {
            push_all(b, lattice_records("module-lattice", &koszul_module_lattice_test(&module, n, settings.cap)?)?);
        }
        let (mt, engine) = module_tor(&module, t, t, settings.engine)?;
        push_all(b, tor_records("module-tor", &mt, engine, 0));
        let a = Arc::new(QuadraticAlgebra::new(p.clone())?);
        let mdims = GradedModule::new(a, module.clone())?.hilbert_series(n)?.dims;
        let qdims = QuadraticAlgebra::new(quotient.clone())?.hilbert_series(n)?.dims;
        b.push(
            Record::new("quotient-dims", Verdict::from_bool(mdims == qdims))
                .degree(n)
                .with("schubert", &label)
                .with("module", &mdims)
                .with("quotient", &qdims),
        );
        if n >= 2 {
            push_all(b, lattice_records("quotient-lattice", &koszul_lattice_test(&quotient, n, settings.cap)?)?);
        }
        let (qt, engine) = tor_table(&quotient, t, t, settings.engine)?;
        push_all(b, tor_records("quotient-tor", &qt, engine, 0));
        if let Some(dir) = &args.emit {
            let mfile = ModuleFile::from_module(&module, "presentation.toml");
            write_file(&dir.join("module.toml"), &mfile.to_toml())?;
            write_file(&dir.join("quotient.toml"), &PresentationFile::from_presentation(&quotient).to_toml())?;
            emitted.extend(["module.toml".to_string(), "quotient.toml".to_string()]);
        }
    }
    if !emitted.is_empty() {
        b.push(Record::new("emit", Verdict::Info).with("files", &emitted));
    }
    Ok(())
}

/// Plücker presentation of `Gr(k, n)` with dimension oracles, lattice and
/// Tor tests, and optionally a Schubert module and its quotient algebra.
pub fn grassmannian(settings: &Settings, args: &GrassmannianArgs) -> RunReport {
    let spec = settings.field.unwrap_or_default();
    run(settings, spec, |b| {
        b.input_bytes("gr", format!("k={} n={} schubert={:?}", args.k, args.n, args.schubert.as_ref().map(|s| s.to_string())).as_bytes());
        with_field!(spec, f => grassmannian_checks(b, f, args, settings))
    })
}

// ---------------------------------------------------------------------------
// pair-tor

fn load_module(b: &mut ReportBuilder, path: &Path) -> Result<(ModuleFile, PresentationFile)> {
    let m = ModuleFile::parse(&b.input_file(path)?)?;
    let ppath = m.presentation_path(path);
    let p = PresentationFile::parse(&b.input_file(&ppath)?)?;
    Ok((m, p))
}

fn pair_checks<F: Field>(
    b: &mut ReportBuilder,
    field: F,
    files: (&ModuleFile, &PresentationFile, &ModuleFile, &PresentationFile),
    i_max: usize,
    j_max: usize,
    settings: &Settings,
) -> Result<()> {
    let (mf, mp, nf, np) = files;
    let pm = mp.build(field.clone())?;
    let pn = np.build(field)?;
    if pm != pn {
        return Err(Error::InvalidPresentation("the two modules are presented over different algebras".into()));
    }
    let m = mf.build(pm)?;
    let n = nf.build(pn)?;
    b.mark();
    // Tor_0 = M ⊗_A N is not expected to sit in degree 0
    let (table, engine) = pair_tor(&m, &n, i_max, j_max, settings.engine)?;
    push_all(b, tor_records("pair-tor", &table, engine, 1));
    Ok(())
}

/// `Tor(M, N)` for a right module file and a left module file; `i_max`
/// defaults to 3 and `max_degree` (internal) to 5.
pub fn pair_tor_cmd(settings: &Settings, m: &Path, n: &Path, i_max: Option<usize>) -> RunReport {
    run(settings, "", |b| {
        let (mf, mp) = load_module(b, m)?;
        let (nf, np) = load_module(b, n)?;
        let spec = match settings.field {
            Some(s) => s,
            None => {
                let s = mp.field_spec()?;
                if s != np.field_spec()? {
                    return Err(Error::InvalidPresentation("module presentations declare different fields".into()));
                }
                s
            }
        };
        b.set_field(spec);
        let j = settings.max_degree.unwrap_or(5);
        let i = i_max.unwrap_or(3.min(j));
        with_field!(spec, f => pair_checks(b, f, (&mf, &mp, &nf, &np), i, j, settings))
    })
}

// ---------------------------------------------------------------------------
// fsplit

#[derive(Clone, Debug)]
pub enum SplittingSource {
    Case(ChartCase),
    /// A polynomial file whose first polynomial is `σ`.
    Sigma(PathBuf),
}

#[derive(Clone, Debug)]
pub struct FsplitArgs {
    pub source: SplittingSource,
    pub p: Option<u32>,
    /// Polynomial files, one ideal each.
    pub ideals: Vec<PathBuf>,
    /// Degree bound for `s(f^p) = f` on monomials.
    pub section_degree: u32,
    /// Check every pair of compatible ideals for closure.
    pub closure: bool,
}

/// Default compatibility bound by number of variables.
pub fn default_fsplit_bound(nvars: usize) -> usize {
    if nvars <= 1 {
        50
    } else {
        12
    }
}

fn compat_record(test: &str, r: &CompatibilityReport) -> Record {
    let mut rec = Record::new(test, Verdict::from_bool(r.compatible))
        .degree(r.degree_bound)
        .with("ideal", &r.ideal)
        .with("checked", r.checked);
    if let Some(c) = &r.counterexample {
        rec = rec.witness(c);
    }
    rec
}

fn fsplit_checks(b: &mut ReportBuilder, args: &FsplitArgs, settings: &Settings) -> Result<()> {
    let (candidate, ideals) = match &args.source {
        SplittingSource::Case(case) => {
            let p = args.p.ok_or_else(|| Error::OutOfRange("a chart case needs --p".into()))?;
            let field = PrimeField::new(p)?;
            b.input_bytes("case", case.to_string().as_bytes());
            let data = schubert_chart_data(*case, field)?;
            (data.candidate()?, data.ideals)
        }
        SplittingSource::Sigma(path) => {
            let polys = parse_polynomial_file(&b.input_file(path)?)?;
            let sigma = polys.into_iter().next().ok_or_else(|| Error::Parse("σ file has no polynomial".into()))?;
            if let Some(p) = args.p {
                if p != sigma.characteristic() {
                    return Err(Error::Parse(format!("--p {p} disagrees with the file's char {}", sigma.characteristic())));
                }
            }
            (SplittingCandidate::new(sigma)?, Vec::new())
        }
    };
    let mut ideals = ideals;
    let vars = candidate.vars().to_vec();
    for path in &args.ideals {
        let gens = parse_polynomial_file(&b.input_file(path)?)?;
        let mut embedded = Vec::new();
        for g in gens {
            if g.characteristic() != candidate.characteristic() {
                return Err(Error::Parse(format!("{}: characteristic differs from σ", path.display())));
            }
            embedded.push(g.embed(&vars)?);
        }
        ideals.push(ChartIdeal::new(path.display().to_string(), embedded)?);
    }
    b.set_field(FieldSpec::PrimeField(candidate.characteristic()));
    b.mark();
    let bound = settings.max_degree.unwrap_or_else(|| default_fsplit_bound(vars.len())) as u32;
    let splits = is_splitting(&candidate);
    b.push(
        Record::new("is-splitting", Verdict::from_bool(splits))
            .with("sigma", candidate.sigma().render())
            .with("vars", &vars),
    );
    if !splits {
        return Ok(());
    }
    let bad = frobenius_section_check(&candidate, args.section_degree);
    let mut rec = Record::new("section", Verdict::from_bool(bad.is_none())).degree(args.section_degree);
    if let Some(e) = bad {
        rec = rec.witness(json!({ "monomial": e }));
    }
    b.push(rec);
    let mut compatible = Vec::new();
    for ideal in &ideals {
        let r = compatibility_check(&candidate, ideal, bound)?;
        if r.compatible {
            compatible.push(ideal);
        }
        b.push(compat_record("compatibility", &r));
    }
    if args.closure {
        for (x, a) in compatible.iter().enumerate() {
            for c in &compatible[x + 1..] {
                let r = closure_property_check(&candidate, a, c, bound)?;
                let mut rec = Record::new("closure", Verdict::from_bool(r.holds()))
                    .degree(bound)
                    .with("pair", [&a.label, &c.label])
                    .with("intersection_dim", r.intersection_dim);
                for part in [&r.sum, &r.intersection].into_iter().flatten() {
                    if let Some(cx) = &part.counterexample {
                        rec = rec.witness(json!({ "ideal": part.ideal, "counterexample": cx }));
                        break;
                    }
                }
                b.push(rec);
            }
        }
    }
    Ok(())
}

/// Splitting and compatibility checks for a chart case or a custom `σ`.
pub fn fsplit(settings: &Settings, args: &FsplitArgs) -> RunReport {
    let field = args.p.map(|p| FieldSpec::PrimeField(p).to_string()).unwrap_or_default();
    run(settings, field, |b| fsplit_checks(b, args, settings))
}

// ---------------------------------------------------------------------------
// corpus

fn agreement_record(test: &str, a: &Agreement) -> Record {
    Record::new(test, Verdict::from_bool(a.agree && a.low_degree_sanity))
        .with("generators", a.generators)
        .with("relations", a.relations)
        .with("lattice_first_failure", a.lattice_first_failure)
        .with("tor_first_off_diagonal", a.tor_first_off_diagonal)
        .with("duality_first_failure", a.duality_first_failure)
        .with("low_degree_sanity", a.low_degree_sanity)
        .with("engine", a.engine)
}

/// Lattice versus Tor agreement over `count` seeded random presentations
/// with at most `g_max` generators, through `max_degree` (default 4).
pub fn corpus(settings: &Settings, seed: u64, count: usize, g_max: usize) -> RunReport {
    run(settings, FieldSpec::default(), |b| {
        if count == 0 {
            return Err(Error::OutOfRange("corpus count must be at least 1".into()));
        }
        if g_max == 0 {
            return Err(Error::OutOfRange("g_max must be at least 1".into()));
        }
        b.input_bytes("corpus", format!("seed={seed} count={count} g_max={g_max}").as_bytes());
        let n = settings.max_degree.unwrap_or(4);
        let mut agreed = 0;
        for (k, s) in corpus_seeds(seed, count).into_iter().enumerate() {
            let inst = random_presentation(s, g_max)?;
            let a = check_agreement(&inst.presentation, n, settings.cap, settings.engine)?;
            let mut rec = agreement_record("instance", &a).degree(k).with("seed", s).with("style", inst.style);
            if a.agree {
                agreed += 1;
            } else {
                rec = rec.witness(json!({ "presentation": PresentationFile::from_presentation(&inst.presentation).to_toml() }));
            }
            b.push(rec);
        }
        b.push(Record::new("agreement", Verdict::from_bool(agreed == count)).with("agreed", agreed).with("count", count));
        Ok(())
    })
}

/// Re-run the agreement check on a recorded presentation file.
pub fn corpus_replay(settings: &Settings, path: &Path) -> RunReport {
    run(settings, "", |b| {
        let file = PresentationFile::parse(&b.input_file(path)?)?;
        let spec = match settings.field {
            Some(s) => s,
            None => file.field_spec()?,
        };
        b.set_field(spec);
        let n = settings.max_degree.unwrap_or(4);
        b.mark();
        with_field!(spec, f => {
            let p = file.build(f)?;
            let a = check_agreement(&p, n, settings.cap, settings.engine)?;
            b.push(
                Record::new("lattice", Verdict::Info)
                    .with("first_failure", a.lattice_first_failure),
            );
            b.push(
                Record::new("tor", Verdict::Info)
                    .with("first_off_diagonal", a.tor_first_off_diagonal)
                    .with("table", &a.tor),
            );
            b.push(agreement_record("agreement", &a));
            Ok(())
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn with_field_dispatches() -> Result<()> {
        let s = FieldSpec::PrimeField(7);
        let c = with_field!(s, f => f.spec().characteristic());
        assert_eq!(c, 7);
        Ok(())
    }

    #[test]
    fn corpus_rejects_empty_count() {
        let r = corpus(&Settings::new(vec![]), 1, 0, 3);
        assert_eq!(r.exit_code(), 2);
    }
}
