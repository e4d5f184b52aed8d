use std::fs;
use std::path::{Path, PathBuf};

use hopfw::forms::TwistSolution;
use hopfw::hopf::{self, ProbeVerdict, Report};
use hopfw::rewrite::CompletionOptions;
use hopfw::{
    io, Error, Matrix, MultilinearForm, NcPoly, Presentation, RewriteSystem, Scalar, Strategy,
    Truncation, Verdict, Verifier,
};
use serde_json::json;
use thiserror::Error;

use crate::{
    Algebra, AnalyzeArgs, ExampleArgs, GbArgs, NfArgs, PresentArgs, StrategyArg, Suite,
    TruncationArg, VerifyArgs,
};

pub const DEGREE_VAR: &str = "HOPFW_DEFAULT_DEGREE";

#[derive(Debug, Error)]
pub enum Failure {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}: {source}", path.display())]
    Input { path: PathBuf, source: Error },
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{0}")]
    Usage(String),
}

impl Failure {
    pub const EXIT_CODE: u8 = 3;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Refuted,
    Uncertified,
}

impl From<Verdict> for Status {
    fn from(v: Verdict) -> Status {
        match v {
            Verdict::Pass => Status::Pass,
            Verdict::Fail => Status::Refuted,
            Verdict::Uncertified => Status::Uncertified,
        }
    }
}

type Outcome = Result<Status, Failure>;

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Strategy {
        match s {
            StrategyArg::Sugar => Strategy::Sugar,
            StrategyArg::Word => Strategy::Word,
            StrategyArg::Escalate => Strategy::Escalate,
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|source| Failure::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn parsed<T>(path: &Path, parse: impl FnOnce(&str) -> hopfw::Result<T>) -> Result<T, Failure> {
    parse(&read(path)?).map_err(|source| Failure::Input {
        path: path.to_path_buf(),
        source,
    })
}

fn read_form(path: &Path) -> Result<MultilinearForm, Failure> {
    parsed(path, io::parse_form)
}

fn emit(text: &str, output: Option<&Path>) -> Result<(), Failure> {
    match output {
        Some(path) => fs::write(path, text).map_err(|source| Failure::Io {
            path: path.to_path_buf(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn degree_or_default(explicit: Option<usize>, m: usize) -> Result<usize, Failure> {
    if let Some(d) = explicit {
        return Ok(d);
    }
    match std::env::var(DEGREE_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("{DEGREE_VAR}={v:?} is not a degree"))),
        Err(_) => Ok(hopf::default_degree(m)),
    }
}

fn require<T: Copy>(value: Option<T>, what: &str) -> Result<T, Failure> {
    value.ok_or_else(|| Failure::Usage(format!("{what} is required")))
}

fn require_form(path: Option<&PathBuf>, what: &str) -> Result<MultilinearForm, Failure> {
    let path = path.ok_or_else(|| Failure::Usage(format!("{what} needs a form file")))?;
    read_form(path)
}

fn describe_matrix(q: &Matrix) -> String {
    let n = q.rows();
    let id = Matrix::identity(n);
    if *q == id {
        "I".into()
    } else if *q == id.scale(&-Scalar::one()) {
        "-I".into()
    } else {
        q.to_string()
    }
}

fn factorial(k: usize) -> i64 {
    (1..=k as i64).product()
}

/// The cyclic-normalization scan `c ∈ {1/(m−1)!, 1/m}`.
fn scan_scales(m: usize) -> Vec<Scalar> {
    let mut out = vec![Scalar::ratio(1, factorial(m - 1))];
    let c = Scalar::ratio(1, m as i64);
    if !out.contains(&c) {
        out.push(c);
    }
    out
}

/// The unique `c` with `c·w ∈ Aff(w)`, if any.
fn polar_multiple(w: &MultilinearForm) -> Option<Scalar> {
    let c = w.contract_polar(w);
    let k = c.entries().first()?.clone();
    let scaled = Matrix::identity(w.dim()).scale(&k);
    (c == scaled).then(|| k.recip()).flatten()
}

fn not_preregular_reason(w: &MultilinearForm) -> Option<String> {
    match w.require_preregular() {
        Ok(_) => None,
        Err(Error::NotPreregular(r)) => Some(r),
        Err(Error::AmbiguousTwist(d)) => Some(format!(
            "twisting element is not unique (solution space of dimension {d})"
        )),
        Err(e) => Some(e.to_string()),
    }
}

pub fn analyze(a: &AnalyzeArgs) -> Outcome {
    let w = read_form(&a.form)?;
    let m = w.arity();
    let report = w.analyze();
    let reason = not_preregular_reason(&w);
    let polar = w.polar();
    let scan: Vec<(Scalar, bool)> = scan_scales(m)
        .into_iter()
        .map(|c| {
            let member = w.scale(&c).is_polar_of(&w);
            (c, member)
        })
        .collect();
    let multiple = polar_multiple(&w);
    let twist = match &report.twist {
        TwistSolution::Unique(q) => format!("Q = {}", describe_matrix(q)),
        TwistSolution::Inconsistent => "none".into(),
        TwistSolution::Ambiguous { dimension, .. } => format!("not unique (dimension {dimension})"),
    };
    let text = if a.json {
        let value = json!({
            "dim": w.dim(),
            "arity": m,
            "nonzero_entries": w.nnz(),
            "nondegenerate": report.nondegenerate,
            "condition_i_prime": w.check_condition_i_prime(),
            "twisting_element": report.q.as_ref().map(|q| q
                .to_rows()
                .into_iter()
                .map(|r| r.into_iter().map(|c| c.to_string()).collect::<Vec<_>>())
                .collect::<Vec<_>>()),
            "preregular": report.preregular,
            "reason": reason,
            "polar_dimension": polar.as_ref().map(|p| p.dimension()),
            "scan": scan
                .iter()
                .map(|(c, member)| json!({"c": c.to_string(), "member": member}))
                .collect::<Vec<_>>(),
            "polar_multiple": multiple.as_ref().map(|c| c.to_string()),
        });
        let mut s = serde_json::to_string_pretty(&value).expect("serializable");
        s.push('\n');
        s
    } else {
        let yes = |b: bool| if b { "yes" } else { "no" };
        let mut lines = vec![
            format!("form: n={}, m={m}, {} nonzero entries", w.dim(), w.nnz()),
            format!("1-site nondegenerate: {}", yes(report.nondegenerate)),
            format!("condition (i'): {}", yes(w.check_condition_i_prime())),
            format!("twisting element: {twist}"),
        ];
        lines.push(match &reason {
            None => "preregular: yes".into(),
            Some(r) => format!("preregular: no ({r})"),
        });
        lines.push(match &polar {
            Some(p) => format!("polar affine dimension: {}", p.dimension()),
            None => "polar affine space: empty".into(),
        });
        for (c, member) in &scan {
            let rel = if *member { "∈" } else { "∉" };
            lines.push(format!("scan: ({c})·w {rel} Aff(w)"));
        }
        lines.push(match &multiple {
            Some(c) => format!("polar multiple: ({c})·w"),
            None => "polar multiple: none".into(),
        });
        let summary = match (&reason, &polar) {
            (Some(r), _) => r.clone(),
            (None, Some(p)) => {
                let mut s = format!("preregular, {twist}, Aff dim = {}", p.dimension());
                for (c, member) in &scan {
                    if *member {
                        s.push_str(&format!(", ({c})·w ∈ Aff"));
                    }
                }
                s
            }
            (None, None) => format!("preregular, {twist}"),
        };
        lines.push(format!("summary: {summary}"));
        let mut s = lines.join("\n");
        s.push('\n');
        s
    };
    emit(&text, None)?;
    Ok(Status::Pass)
}

/// The given polar element, or the only member of `Aff(w)`.
fn unique_polar(w: &MultilinearForm, path: Option<&PathBuf>) -> Result<MultilinearForm, Failure> {
    if let Some(path) = path {
        return given_polar(w, path);
    }
    let sol = w
        .polar()
        .ok_or_else(|| Error::NotPreregular("no polar: form is degenerate".into()))?;
    if sol.dimension() > 0 {
        return Err(Failure::Usage(format!(
            "polar is not unique (Aff dimension {}); pass --polar",
            sol.dimension()
        )));
    }
    Ok(sol.particular)
}

fn given_polar(w: &MultilinearForm, path: &Path) -> Result<MultilinearForm, Failure> {
    let polar = read_form(path)?;
    if !polar.is_polar_of(w) {
        return Err(Failure::Input {
            path: path.to_path_buf(),
            source: Error::NotInPolar,
        });
    }
    Ok(polar)
}

struct Source<'a> {
    form: Option<&'a PathBuf>,
    polar: Option<&'a PathBuf>,
    m: Option<usize>,
    n: Option<usize>,
}

fn build(algebra: Algebra, src: &Source) -> Result<Presentation, Failure> {
    if algebra == Algebra::Ahmn {
        let m = require(src.m, "--m")?;
        let n = require(src.n, "--n")?;
        return Ok(hopf::build_ahmn(m, n)?);
    }
    let w = require_form(src.form, "this algebra")?;
    Ok(match algebra {
        Algebra::Bw => hopf::build_bw(&w)?,
        Algebra::Hb => hopf::build_hb(&w)?,
        Algebra::Hw => hopf::build_hw(&w)?,
        Algebra::Hww => hopf::build_hww(&w, &unique_polar(&w, src.polar)?)?,
        Algebra::Ahmn => unreachable!("handled above"),
    })
}

pub fn present(a: &PresentArgs) -> Outcome {
    let p = build(
        a.algebra,
        &Source {
            form: a.form.as_ref(),
            polar: a.polar.as_ref(),
            m: a.m,
            n: a.n,
        },
    )?;
    emit(&io::write_presentation(&p), a.output.as_deref())?;
    Ok(Status::Pass)
}

pub fn gb(a: &GbArgs) -> Outcome {
    let p = parsed(&a.presentation, io::parse_presentation)?;
    let degree = degree_or_default(a.degree, p.m)?;
    let options = CompletionOptions {
        truncation: match a.truncation {
            TruncationArg::Sugar => Truncation::Sugar,
            TruncationArg::Word => Truncation::Word,
        },
        ..CompletionOptions::default()
    };
    let system = RewriteSystem::complete_with(&p.alphabet, &p.relations, degree, &options)?;
    emit(&system.dump(), a.output.as_deref())?;
    Ok(Status::Pass)
}

pub fn nf(a: &NfArgs) -> Outcome {
    let p: NcPoly = a.poly.parse()?;
    let nf = match &a.system {
        None => p,
        Some(path) => {
            let sys = parsed(path, RewriteSystem::parse_dump)?;
            if sys.is_saturated() {
                sys.saturated_normal_form(&p)?
            } else {
                sys.normal_form(&p)?
            }
        }
    };
    println!("{nf}");
    Ok(Status::Pass)
}

fn print_report(r: &Report) -> Status {
    println!("{r}");
    r.verdict().into()
}

pub fn verify(a: &VerifyArgs) -> Outcome {
    let strategy = Strategy::from(a.strategy);
    let form = || require_form(a.form.as_ref(), "this suite");
    let verifier = |p: Presentation, m: usize| -> Result<Verifier, Failure> {
        let d = degree_or_default(a.degree, m)?;
        Ok(Verifier::with_strategy(p, d, strategy)?)
    };
    match a.suite {
        Suite::Axioms => {
            let p = build(
                a.algebra,
                &Source {
                    form: a.form.as_ref(),
                    polar: a.polar.as_ref(),
                    m: a.m,
                    n: a.n,
                },
            )?;
            let m = p.m;
            let v = verifier(p, m)?;
            let mut report = v.axioms()?;
            if a.algebra == Algebra::Bw {
                let w = form()?;
                let polar = match &a.polar {
                    Some(path) => given_polar(&w, path)?,
                    None => {
                        w.polar()
                            .ok_or_else(|| {
                                Error::NotPreregular("no polar: form is degenerate".into())
                            })?
                            .particular
                    }
                };
                report.push(v.check_left_inverse(&polar)?);
            }
            Ok(print_report(&report))
        }
        Suite::Prop51 => {
            let w = form()?;
            let samples = match &a.polar {
                Some(path) => vec![given_polar(&w, path)?],
                None => hopf::polar_samples(&w)?,
            };
            let v = verifier(hopf::build_hw(&w)?, w.arity())?;
            Ok(print_report(&hopf::universal_suite(&v, &samples)?))
        }
        Suite::Lemma71 => {
            let w = form()?;
            let identities = hopf::quadratic_identities(&w)?;
            let v = verifier(hopf::build_hw(&w)?, w.arity())?;
            let mut report =
                Report::new(format!("quadratic identities in {}", v.presentation().name));
            report.push(v.check_zero("quadratic identities", &identities));
            Ok(print_report(&report))
        }
        Suite::Manin => {
            let w = form()?;
            let (cols, cross) = hopf::manin_identities(w.dim());
            let v = verifier(hopf::build_hw(&w)?, w.arity())?;
            let mut report = Report::new(format!("Manin relations in {}", v.presentation().name));
            report.push(v.check_zero("column commutation", &cols));
            report.push(v.check_zero("cross relations", &cross));
            Ok(print_report(&report))
        }
        Suite::ThetaIso => {
            let n = require(a.n, "--n")?;
            let m = require(a.m, "--m")?;
            let d = degree_or_default(a.degree, m)?;
            Ok(print_report(&hopf::reflection_isomorphism(
                n, m, d, strategy,
            )?))
        }
        Suite::M2Iso => {
            let w = form()?;
            let d = degree_or_default(a.degree, w.arity())?;
            Ok(print_report(&hopf::bilinear_identification(
                &w, d, strategy,
            )?))
        }
        Suite::Noninjectivity => {
            let w = form()?;
            let polar = match (&a.polar, polar_multiple(&w)) {
                (Some(path), _) => given_polar(&w, path)?,
                (None, Some(c)) => w.scale(&c),
                (None, None) => unique_polar(&w, None)?,
            };
            let d = degree_or_default(a.degree, w.arity())?;
            let probe = hopf::noninjectivity_probe(&w, &polar, d)?;
            println!("# noninjectivity of H(w) → H(w,w̃)");
            println!("{}", probe.witness.relations);
            for (l, r, il, ir) in &probe.witness.witnesses {
                let rel = if il == ir { "=" } else { "≠" };
                println!("witness: image of {l} = {il} {rel} {ir} = image of {r}");
            }
            if let Some(res) = &probe.commutator_residue {
                println!("commutator residue: {res}");
            }
            println!("{}", probe.verdict);
            Ok(match probe.verdict {
                ProbeVerdict::NoninjectiveCertified { .. } => Status::Pass,
                ProbeVerdict::Inconclusive { .. } => Status::Uncertified,
            })
        }
    }
}

const EXAMPLES: &str = "signature-M, orthogonal-N-M, symplectic2, cyclic2";

fn example_form(name: &str) -> Result<MultilinearForm, Failure> {
    let unknown = || Failure::Usage(format!("unknown example {name:?}; available: {EXAMPLES}"));
    let numbers = |rest: &str| -> Result<Vec<usize>, Failure> {
        rest.split('-')
            .map(|x| x.parse().map_err(|_| unknown()))
            .collect()
    };
    if let Some(rest) = name.strip_prefix("signature-") {
        match numbers(rest)?[..] {
            [m] => return Ok(MultilinearForm::signature(m, m)?),
            _ => return Err(unknown()),
        }
    }
    if let Some(rest) = name.strip_prefix("orthogonal-") {
        match numbers(rest)?[..] {
            [n, m] => return Ok(MultilinearForm::orthogonal(n, m)?),
            _ => return Err(unknown()),
        }
    }
    match name {
        "symplectic2" => Ok(MultilinearForm::symplectic2()),
        "cyclic2" => Ok(MultilinearForm::cyclic2()),
        _ => Err(unknown()),
    }
}

pub fn example(a: &ExampleArgs) -> Outcome {
    let w = example_form(&a.name)?;
    emit(&io::write_form(&w), a.output.as_deref())?;
    Ok(Status::Pass)
}
