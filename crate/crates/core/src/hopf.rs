//! Presented (bi)algebras attached to multilinear forms, their structure
//! maps, and the checks that run against a truncated rewrite system.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::OnceLock;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::exactnum::{Matrix, Scalar};
use crate::forms::{index_tuples, MultilinearForm};
use crate::ncalg::{Family, Generator, NcPoly, TensorSquareElement, Word};
use crate::rewrite::{CompletionOptions, RewriteSystem, Truncation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AlgebraKind {
    /// Universal bialgebra on generators `a`.
    Bialgebra,
    /// Bilinear case on generators `u`.
    Bilinear,
    /// Universal Hopf algebra on generators `u`, `s`.
    Universal,
    /// Quotient depending on a polar element, generators `v`.
    WithPolar,
    /// Quantum reflection presentation on generators `a`.
    Reflection,
}

impl AlgebraKind {
    pub fn short_name(self) -> &'static str {
        match self {
            AlgebraKind::Bialgebra => "bw",
            AlgebraKind::Bilinear => "hb",
            AlgebraKind::Universal => "hw",
            AlgebraKind::WithPolar => "hww",
            AlgebraKind::Reflection => "ahmn",
        }
    }

    pub fn from_short_name(s: &str) -> Option<AlgebraKind> {
        Some(match s {
            "bw" => AlgebraKind::Bialgebra,
            "hb" => AlgebraKind::Bilinear,
            "hw" => AlgebraKind::Universal,
            "hww" => AlgebraKind::WithPolar,
            "ahmn" => AlgebraKind::Reflection,
            _ => return None,
        })
    }
}

/// Structure maps on generators. `antipode` is absent for bialgebras.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HopfStructure {
    pub coproduct: BTreeMap<Generator, TensorSquareElement>,
    pub counit: BTreeMap<Generator, Scalar>,
    pub antipode: Option<BTreeMap<Generator, NcPoly>>,
}

/// The inputs a presentation was built from.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Provenance {
    pub form: Option<MultilinearForm>,
    pub twist: Option<Matrix>,
    pub polar: Option<MultilinearForm>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub name: String,
    pub kind: Option<AlgebraKind>,
    pub n: usize,
    pub m: usize,
    pub alphabet: Vec<Generator>,
    pub relations: Vec<NcPoly>,
    pub structure: Option<HopfStructure>,
    pub provenance: Provenance,
}

impl Presentation {
    /// Collects `relations`: zeros dropped, exact duplicates removed, first
    /// occurrence order kept.
    pub fn new(
        name: impl Into<String>,
        n: usize,
        m: usize,
        alphabet: Vec<Generator>,
        relations: impl IntoIterator<Item = NcPoly>,
    ) -> Presentation {
        let mut seen = BTreeSet::new();
        let mut kept = Vec::new();
        for r in relations {
            if !r.is_zero() && seen.insert(r.clone()) {
                kept.push(r);
            }
        }
        Presentation {
            name: name.into(),
            kind: None,
            n,
            m,
            alphabet,
            relations: kept,
            structure: None,
            provenance: Provenance::default(),
        }
    }

    pub fn max_relation_degree(&self) -> usize {
        self.relations.iter().map(NcPoly::degree).max().unwrap_or(0)
    }

    pub fn generators(&self) -> &[Generator] {
        &self.alphabet
    }

    fn structure(&self) -> Result<&HopfStructure> {
        self.structure.as_ref().ok_or(Error::NoStructure)
    }

    /// Ideal generated by no relations over the same alphabet.
    pub fn identity_images(&self) -> BTreeMap<Generator, NcPoly> {
        self.alphabet
            .iter()
            .map(|g| (g.clone(), NcPoly::generator(g.clone())))
            .collect()
    }
}

fn g(family: Family, row: usize, col: usize) -> Generator {
    Generator::matric(family, row, col)
}

fn matric_coproduct(family: Family, n: usize) -> BTreeMap<Generator, TensorSquareElement> {
    let mut out = BTreeMap::new();
    for mu in 1..=n {
        for nu in 1..=n {
            let mut t = TensorSquareElement::zero();
            for l in 1..=n {
                t.add_term(
                    Word::letter(g(family, mu, l)),
                    Word::letter(g(family, l, nu)),
                    &Scalar::one(),
                );
            }
            out.insert(g(family, mu, nu), t);
        }
    }
    out
}

fn delta_counit(families: &[Family], n: usize) -> BTreeMap<Generator, Scalar> {
    let mut out = BTreeMap::new();
    for &f in families {
        for mu in 1..=n {
            for nu in 1..=n {
                out.insert(g(f, mu, nu), Scalar::delta(mu, nu));
            }
        }
    }
    out
}

/// `Σ_λ w_λ g^{λ₁}_{μ₁}…g^{λ_m}_{μ_m} − w_μ·1` for every tuple `μ`; with
/// `upper` the contracted index sits in the lower slot instead:
/// `Σ_λ w_λ g^{μ₁}_{λ₁}…g^{μ_m}_{λ_m} − w_μ·1`.
fn invariance_relations(w: &MultilinearForm, family: Family, upper: bool) -> Vec<NcPoly> {
    let n = w.dim();
    let m = w.arity();
    let mut out = Vec::new();
    for mu in index_tuples(n, m) {
        let mut p = NcPoly::constant(-w.get(&mu));
        for (lam, c) in w.entries() {
            let word: Word = (0..m)
                .map(|k| {
                    if upper {
                        g(family, mu[k], lam[k])
                    } else {
                        g(family, lam[k], mu[k])
                    }
                })
                .collect();
            p.add_term(word, c);
        }
        out.push(p);
    }
    out
}

/// `Σ w̃^{μλ₁…λ_{m−1}} g^{ρ₁}_{λ₁}…g^{ρ_{m−1}}_{λ_{m−1}} w_{ρ₁…ρ_{m−1}ν}`, with
/// the generator string reversed when `reversed` is set.
fn polar_expression(
    polar: &MultilinearForm,
    w: &MultilinearForm,
    family: Family,
    mu: usize,
    nu: usize,
    reversed: bool,
) -> NcPoly {
    let m = w.arity();
    let mut p = NcPoly::zero();
    for (t, tc) in polar.entries() {
        if t[0] != mu {
            continue;
        }
        let lam = &t[1..];
        for (r, rc) in w.entries() {
            if r[m - 1] != nu {
                continue;
            }
            let mut letters: Vec<Generator> = (0..m - 1).map(|k| g(family, r[k], lam[k])).collect();
            if reversed {
                letters.reverse();
            }
            p.add_term(Word(letters), &(tc * rc));
        }
    }
    p
}

fn inverse_pair_relations(n: usize, q: &Matrix, qinv: &Matrix) -> Vec<NcPoly> {
    let (u, s) = (Family::U, Family::S);
    let mut out = Vec::new();
    for mu in 1..=n {
        for nu in 1..=n {
            let mut p = NcPoly::constant(-Scalar::delta(mu, nu));
            for l in 1..=n {
                p.add_term(Word(vec![g(u, mu, l), g(s, l, nu)]), &Scalar::one());
            }
            out.push(p);
        }
    }
    for mu in 1..=n {
        for nu in 1..=n {
            let mut p = NcPoly::constant(-Scalar::delta(mu, nu));
            for l in 1..=n {
                let ql = &q[(l - 1, nu - 1)];
                if ql.is_zero() {
                    continue;
                }
                for rho in 1..=n {
                    for sigma in 1..=n {
                        let qi = &qinv[(sigma - 1, rho - 1)];
                        if qi.is_zero() {
                            continue;
                        }
                        p.add_term(Word(vec![g(u, rho, l), g(s, mu, sigma)]), &(ql * qi));
                    }
                }
            }
            out.push(p);
        }
    }
    out
}

/// `Σ (Q⁻¹)^μ_ρ u^ρ_λ Q^λ_ν`.
fn conjugated_u(n: usize, q: &Matrix, qinv: &Matrix, mu: usize, nu: usize) -> NcPoly {
    let mut p = NcPoly::zero();
    for rho in 1..=n {
        let a = &qinv[(mu - 1, rho - 1)];
        if a.is_zero() {
            continue;
        }
        for l in 1..=n {
            let b = &q[(l - 1, nu - 1)];
            if !b.is_zero() {
                p.add_term(Word::letter(g(Family::U, rho, l)), &(a * b));
            }
        }
    }
    p
}

/// `B(w)`: generators `a`, invariance relations, matric bialgebra maps.
pub fn build_bw(w: &MultilinearForm) -> Result<Presentation> {
    if !w.is_one_site_nondegenerate() {
        return Err(Error::NotPreregular(
            "form is degenerate in its last slot".into(),
        ));
    }
    let n = w.dim();
    let mut p = Presentation::new(
        "B(w)",
        n,
        w.arity(),
        Generator::matric_block(Family::A, n),
        invariance_relations(w, Family::A, false),
    );
    p.kind = Some(AlgebraKind::Bialgebra);
    p.structure = Some(HopfStructure {
        coproduct: matric_coproduct(Family::A, n),
        counit: delta_counit(&[Family::A], n),
        antipode: None,
    });
    p.provenance.form = Some(w.clone());
    Ok(p)
}

/// `H(b)` for a nondegenerate bilinear form.
pub fn build_hb(b: &MultilinearForm) -> Result<Presentation> {
    let bm = b.bilinear_matrix()?;
    let binv = bm.inverse()?;
    let n = b.dim();
    let u = Family::U;
    let mut rels = Vec::new();
    for l in 1..=n {
        for r in 1..=n {
            let mut p = NcPoly::constant(-bm[(l - 1, r - 1)].clone());
            for mu in 1..=n {
                for nu in 1..=n {
                    let c = &bm[(mu - 1, nu - 1)];
                    if !c.is_zero() {
                        p.add_term(Word(vec![g(u, mu, l), g(u, nu, r)]), c);
                    }
                }
            }
            rels.push(p);
        }
    }
    for l in 1..=n {
        for r in 1..=n {
            let mut p = NcPoly::constant(-binv[(l - 1, r - 1)].clone());
            for mu in 1..=n {
                for nu in 1..=n {
                    let c = &binv[(mu - 1, nu - 1)];
                    if !c.is_zero() {
                        p.add_term(Word(vec![g(u, l, mu), g(u, r, nu)]), c);
                    }
                }
            }
            rels.push(p);
        }
    }
    let mut antipode = BTreeMap::new();
    for mu in 1..=n {
        for nu in 1..=n {
            let mut s = NcPoly::zero();
            for l in 1..=n {
                for rho in 1..=n {
                    let c = &binv[(mu - 1, l - 1)] * &bm[(rho - 1, nu - 1)];
                    if !c.is_zero() {
                        s.add_term(Word::letter(g(u, rho, l)), &c);
                    }
                }
            }
            antipode.insert(g(u, mu, nu), s);
        }
    }
    let mut p = Presentation::new("H(b)", n, 2, Generator::matric_block(u, n), rels);
    p.kind = Some(AlgebraKind::Bilinear);
    p.structure = Some(HopfStructure {
        coproduct: matric_coproduct(u, n),
        counit: delta_counit(&[u], n),
        antipode: Some(antipode),
    });
    p.provenance.form = Some(b.clone());
    Ok(p)
}

/// `H(w)` on generators `u`, `s`; the twisting element is recomputed.
pub fn build_hw(w: &MultilinearForm) -> Result<Presentation> {
    let q = w.require_preregular()?;
    let qinv = q.inverse()?;
    let n = w.dim();
    let mut rels = inverse_pair_relations(n, &q, &qinv);
    rels.extend(invariance_relations(w, Family::U, false));
    let mut alphabet = Generator::matric_block(Family::U, n);
    alphabet.extend(Generator::matric_block(Family::S, n));
    let mut coproduct = matric_coproduct(Family::U, n);
    let mut antipode = BTreeMap::new();
    for mu in 1..=n {
        for nu in 1..=n {
            let mut t = TensorSquareElement::zero();
            for l in 1..=n {
                t.add_term(
                    Word::letter(g(Family::S, l, nu)),
                    Word::letter(g(Family::S, mu, l)),
                    &Scalar::one(),
                );
            }
            coproduct.insert(g(Family::S, mu, nu), t);
            antipode.insert(
                g(Family::U, mu, nu),
                NcPoly::generator(g(Family::S, mu, nu)),
            );
            antipode.insert(g(Family::S, mu, nu), conjugated_u(n, &q, &qinv, mu, nu));
        }
    }
    let mut p = Presentation::new("H(w)", n, w.arity(), alphabet, rels);
    p.kind = Some(AlgebraKind::Universal);
    p.structure = Some(HopfStructure {
        coproduct,
        counit: delta_counit(&[Family::U, Family::S], n),
        antipode: Some(antipode),
    });
    p.provenance.form = Some(w.clone());
    p.provenance.twist = Some(q);
    Ok(p)
}

/// `H(w, w̃)` on generators `v`; `polar` must lie in the polar of `w`.
pub fn build_hww(w: &MultilinearForm, polar: &MultilinearForm) -> Result<Presentation> {
    let q = w.require_preregular()?;
    if !polar.is_polar_of(w) {
        return Err(Error::NotInPolar);
    }
    let n = w.dim();
    let v = Family::V;
    let mut rels = invariance_relations(w, v, false);
    rels.extend(invariance_relations(polar, v, true));
    let mut antipode = BTreeMap::new();
    for mu in 1..=n {
        for nu in 1..=n {
            antipode.insert(g(v, mu, nu), polar_expression(polar, w, v, mu, nu, false));
        }
    }
    let mut p = Presentation::new("H(w,w~)", n, w.arity(), Generator::matric_block(v, n), rels);
    p.kind = Some(AlgebraKind::WithPolar);
    p.structure = Some(HopfStructure {
        coproduct: matric_coproduct(v, n),
        counit: delta_counit(&[v], n),
        antipode: Some(antipode),
    });
    p.provenance = Provenance {
        form: Some(w.clone()),
        twist: Some(q),
        polar: Some(polar.clone()),
    };
    Ok(p)
}

/// The quantum reflection presentation `A_h^m(n)`.
pub fn build_ahmn(m: usize, n: usize) -> Result<Presentation> {
    if m < 2 || n < 2 {
        return Err(Error::Invalid(format!(
            "need m ≥ 2 and n ≥ 2, got m={m}, n={n}"
        )));
    }
    let a = Family::A;
    let mut rels = Vec::new();
    for mu in 1..=n {
        for l in 1..=n {
            for nu in 1..=n {
                if l != nu {
                    rels.push(NcPoly::monomial([g(a, mu, l), g(a, mu, nu)]));
                }
            }
        }
    }
    for mu in 1..=n {
        for l in 1..=n {
            for nu in 1..=n {
                if l != nu {
                    rels.push(NcPoly::monomial([g(a, l, mu), g(a, nu, mu)]));
                }
            }
        }
    }
    for mu in 1..=n {
        let mut rows = NcPoly::constant(-Scalar::one());
        let mut cols = NcPoly::constant(-Scalar::one());
        for l in 1..=n {
            rows.add_term(Word(vec![g(a, mu, l); m]), &Scalar::one());
            cols.add_term(Word(vec![g(a, l, mu); m]), &Scalar::one());
        }
        rels.push(rows);
        rels.push(cols);
    }
    let mut antipode = BTreeMap::new();
    for mu in 1..=n {
        for nu in 1..=n {
            antipode.insert(g(a, mu, nu), NcPoly::monomial(vec![g(a, nu, mu); m - 1]));
        }
    }
    let mut p = Presentation::new("A_h^m(n)", n, m, Generator::matric_block(a, n), rels);
    p.kind = Some(AlgebraKind::Reflection);
    p.structure = Some(HopfStructure {
        coproduct: matric_coproduct(a, n),
        counit: delta_counit(&[a], n),
        antipode: Some(antipode),
    });
    Ok(p)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Verdict {
    Pass,
    Fail,
    Uncertified,
}

impl Verdict {
    pub fn label(self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Uncertified => "UNCERTIFIED",
        }
    }

    /// Fail dominates Uncertified, which dominates Pass.
    pub fn combine(self, other: Verdict) -> Verdict {
        use Verdict::*;
        match (self, other) {
            (Fail, _) | (_, Fail) => Fail,
            (Uncertified, _) | (_, Uncertified) => Uncertified,
            _ => Pass,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// One identity family: every instance must reduce to zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckItem {
    pub name: String,
    pub verdict: Verdict,
    pub instances: usize,
    /// Highest degree among the instances.
    pub degree: usize,
    pub detail: String,
}

impl fmt::Display for CheckItem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<11} {} ({} instances, degree ≤ {})",
            self.verdict.label(),
            self.name,
            self.instances,
            self.degree
        )?;
        if !self.detail.is_empty() {
            write!(f, ": {}", self.detail)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub title: String,
    pub items: Vec<CheckItem>,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Report {
        Report {
            title: title.into(),
            items: Vec::new(),
        }
    }

    pub fn verdict(&self) -> Verdict {
        self.items
            .iter()
            .fold(Verdict::Pass, |acc, i| acc.combine(i.verdict))
    }

    pub fn passed(&self) -> bool {
        self.verdict() == Verdict::Pass
    }

    pub fn extend(&mut self, other: Report) {
        self.items.extend(other.items);
    }

    pub fn push(&mut self, item: CheckItem) {
        self.items.push(item);
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "# {}", self.title)?;
        for i in &self.items {
            writeln!(f, "{i}")?;
        }
        write!(f, "{}", self.verdict().label())
    }
}

/// Builds a [`CheckItem`] from exact per-instance outcomes. `outcome` is
/// `Ok(None)` on success, `Ok(Some(msg))` on a refutation and `Err(_)` when
/// the instance is not certified.
type Outcome = (usize, std::result::Result<Option<String>, String>);

fn summarize<I>(name: &str, outcomes: I) -> CheckItem
where
    I: IntoIterator<Item = Outcome>,
{
    let mut verdict = Verdict::Pass;
    let mut instances = 0;
    let mut degree = 0;
    let mut first_fail: Option<String> = None;
    let mut first_uncertified: Option<String> = None;
    let mut fails = 0;
    for (d, o) in outcomes {
        instances += 1;
        degree = degree.max(d);
        match o {
            Ok(None) => {}
            Ok(Some(msg)) => {
                fails += 1;
                verdict = verdict.combine(Verdict::Fail);
                first_fail.get_or_insert(msg);
            }
            Err(msg) => {
                verdict = verdict.combine(Verdict::Uncertified);
                first_uncertified.get_or_insert(msg);
            }
        }
    }
    let detail = match (first_fail, first_uncertified) {
        (Some(f), _) => format!("{fails} failing, first: {f}"),
        (None, Some(u)) => u,
        _ => String::new(),
    };
    CheckItem {
        name: name.to_string(),
        verdict,
        instances,
        degree,
        detail,
    }
}

/// A presentation together with its rewrite system completed through a
/// fixed degree.
#[derive(Clone, Debug)]
pub struct Verifier {
    presentation: Presentation,
    system: RewriteSystem,
    strategy: Strategy,
    fallback: OnceLock<Option<RewriteSystem>>,
}

/// Which truncated systems a [`Verifier`] consults.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Strategy {
    /// Only the sugar-truncated system.
    Sugar,
    /// Only the word-truncated system.
    Word,
    /// The sugar-truncated system first; residues it leaves open are
    /// retried in a word-truncated system of the same degree, built on
    /// first use and abandoned past [`ESCALATION_RULE_LIMIT`] rules.
    #[default]
    Escalate,
}

impl Strategy {
    pub fn name(self) -> &'static str {
        match self {
            Strategy::Sugar => "sugar",
            Strategy::Word => "word",
            Strategy::Escalate => "escalate",
        }
    }

    pub fn from_name(s: &str) -> Option<Strategy> {
        [Strategy::Sugar, Strategy::Word, Strategy::Escalate]
            .into_iter()
            .find(|k| k.name() == s)
    }
}

pub const ESCALATION_RULE_LIMIT: usize = 5000;

enum Judgement {
    Zero,
    Refuted(String),
    Open(String),
}

/// The default verification degree for arity `m`.
pub fn default_degree(m: usize) -> usize {
    if m == 2 {
        4
    } else {
        2 * m
    }
}

impl Verifier {
    pub fn new(presentation: Presentation, degree: usize) -> Result<Verifier> {
        Verifier::with_strategy(presentation, degree, Strategy::default())
    }

    pub fn with_strategy(
        presentation: Presentation,
        degree: usize,
        strategy: Strategy,
    ) -> Result<Verifier> {
        let start = Instant::now();
        let truncation = match strategy {
            Strategy::Word => Truncation::Word,
            Strategy::Sugar | Strategy::Escalate => Truncation::Sugar,
        };
        let options = CompletionOptions {
            truncation,
            ..CompletionOptions::default()
        };
        let system = RewriteSystem::complete_with(
            &presentation.alphabet,
            &presentation.relations,
            degree,
            &options,
        )?;
        log::info!(
            "{}: {} rules through degree {degree} in {:.2?}",
            presentation.name,
            system.len(),
            start.elapsed()
        );
        Ok(Verifier {
            presentation,
            system,
            strategy,
            fallback: OnceLock::new(),
        })
    }

    /// A verifier over a precomputed system, with no escalation.
    pub fn from_parts(presentation: Presentation, system: RewriteSystem) -> Verifier {
        Verifier {
            presentation,
            system,
            strategy: Strategy::Sugar,
            fallback: OnceLock::new(),
        }
    }

    pub fn strategy(&self) -> Strategy {
        self.strategy
    }

    fn fallback(&self) -> Option<&RewriteSystem> {
        if self.strategy != Strategy::Escalate || self.system.is_saturated() {
            return None;
        }
        self.fallback
            .get_or_init(|| {
                let start = Instant::now();
                let options = CompletionOptions {
                    truncation: Truncation::Word,
                    rule_limit: Some(ESCALATION_RULE_LIMIT),
                    ..CompletionOptions::default()
                };
                let degree = self.system.complete_through();
                let p = &self.presentation;
                match RewriteSystem::complete_with(&p.alphabet, &p.relations, degree, &options) {
                    Ok(sys) => {
                        log::info!(
                            "{}: word truncation gives {} rules through degree {degree} in {:.2?}",
                            p.name,
                            sys.len(),
                            start.elapsed()
                        );
                        Some(sys)
                    }
                    Err(e) => {
                        log::warn!("{}: word truncation abandoned: {e}", p.name);
                        None
                    }
                }
            })
            .as_ref()
    }

    /// Runs `judge` on the primary system, then on the fallback if the
    /// primary leaves the question open.
    /// `judge` also receives 0 for the primary system and 1 for the fallback.
    fn decide<J>(&self, mut judge: J) -> Result<Judgement>
    where
        J: FnMut(&RewriteSystem, usize) -> Result<Judgement>,
    {
        let first = judge(&self.system, 0)?;
        if let Judgement::Open(_) = first {
            if let Some(fb) = self.fallback() {
                match judge(fb, 1)? {
                    Judgement::Open(_) => {}
                    other => return Ok(other),
                }
            }
        }
        Ok(first)
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn system(&self) -> &RewriteSystem {
        &self.system
    }

    pub fn degree(&self) -> usize {
        self.system.complete_through()
    }

    pub fn normal_form(&self, p: &NcPoly) -> Result<NcPoly> {
        self.system.normal_form(p)
    }

    /// Normal form modulo the whole ideal when the system is saturated, the
    /// degree-`D` normal form otherwise.
    pub fn best_normal_form(&self, p: &NcPoly) -> Result<NcPoly> {
        if self.is_saturated() {
            self.system.saturated_normal_form(p)
        } else {
            self.system.normal_form(p)
        }
    }

    /// Whether the system decides membership in the whole ideal.
    pub fn is_saturated(&self) -> bool {
        self.system.is_saturated()
    }

    /// `Ok(None)` if `p` reduces to zero. A nonzero residue is a refutation
    /// (`Ok(Some(_))`) only for a saturated system; otherwise it leaves the
    /// question open (`Err(_)`).
    fn outcome(&self, label: impl Fn() -> String, p: &NcPoly) -> Outcome {
        let d = p.degree();
        match self.decide(|sys, _| judge_poly(sys, p)) {
            Ok(Judgement::Zero) => (d, Ok(None)),
            Ok(Judgement::Refuted(msg)) => (d, Ok(Some(format!("{} {msg}", label())))),
            Ok(Judgement::Open(msg)) => (d, Err(format!("{} {msg}", label()))),
            Err(e) => (d, Err(e.to_string())),
        }
    }

    /// Every polynomial must reduce to zero.
    pub fn check_zero(&self, name: &str, polys: &[NcPoly]) -> CheckItem {
        summarize(
            name,
            polys
                .iter()
                .enumerate()
                .map(|(i, p)| self.outcome(|| format!("#{}", i + 1), p)),
        )
    }

    /// Counit applied to each relation vanishes exactly.
    pub fn check_counit(&self) -> Result<CheckItem> {
        check_counit(&self.presentation)
    }

    /// `Δ(r)` vanishes in the truncated tensor square for every relation.
    pub fn check_coproduct(&self) -> Result<CheckItem> {
        let st = self.presentation.structure()?;
        let mut outcomes = Vec::new();
        let mut caches: [WordCache; 2] = Default::default();
        for (i, r) in self.presentation.relations.iter().enumerate() {
            let image = r.coproduct_image(&st.coproduct)?;
            let label = format!("relation #{}", i + 1);
            let d = r.degree();
            let judged = self.decide(|sys, k| judge_tensor(sys, &image, d, &mut caches[k]))?;
            outcomes.push(match judged {
                Judgement::Zero => (d, Ok(None)),
                Judgement::Refuted(msg) => (d, Ok(Some(format!("{label} {msg}")))),
                Judgement::Open(msg) => (d, Err(format!("{label} {msg}"))),
            });
        }
        Ok(summarize("coproduct respects relations", outcomes))
    }

    /// The antipode sends relations into the ideal and satisfies the
    /// antipode axiom on every generator.
    pub fn check_antipode(&self) -> Result<Report> {
        let st = self.presentation.structure()?;
        let s = st.antipode.as_ref().ok_or(Error::NoStructure)?;
        let mut report = Report::new(format!("antipode of {}", self.presentation.name));
        let images: Vec<NcPoly> = self
            .presentation
            .relations
            .iter()
            .map(|r| r.substitute(s, true))
            .collect::<Result<_>>()?;
        report.push(self.check_zero("antipode respects relations", &images));
        let mut left = Vec::new();
        let mut right = Vec::new();
        for gen in &self.presentation.alphabet {
            let delta = st
                .coproduct
                .get(gen)
                .ok_or_else(|| Error::MissingImage(gen.to_string()))?;
            let eps = st
                .counit
                .get(gen)
                .ok_or_else(|| Error::MissingImage(gen.to_string()))?;
            let mut l = NcPoly::constant(-eps.clone());
            let mut r = NcPoly::constant(-eps.clone());
            for (w1, w2, c) in delta.terms() {
                let s1 = NcPoly::word(w1.clone()).substitute(s, true)?;
                let s2 = NcPoly::word(w2.clone()).substitute(s, true)?;
                l.add_scaled(&(&s1 * &NcPoly::word(w2.clone())), c);
                r.add_scaled(&(&NcPoly::word(w1.clone()) * &s2), c);
            }
            left.push(l);
            right.push(r);
        }
        report.push(self.check_zero("S(x₁)x₂ = ε(x)1 on generators", &left));
        report.push(self.check_zero("x₁S(x₂) = ε(x)1 on generators", &right));
        Ok(report)
    }

    /// Counit, coproduct and (if present) antipode.
    pub fn axioms(&self) -> Result<Report> {
        let mut report = Report::new(format!("Hopf axioms for {}", self.presentation.name));
        report.push(self.check_counit()?);
        report.push(self.check_coproduct()?);
        if self.presentation.structure()?.antipode.is_some() {
            report.extend(self.check_antipode()?);
        }
        Ok(report)
    }

    /// Every source relation maps into this presentation's ideal.
    pub fn check_hom(&self, hom: &HomCandidate) -> Result<CheckItem> {
        for gen in &hom.source.alphabet {
            if !hom.images.contains_key(gen) {
                return Err(Error::MissingImage(gen.to_string()));
            }
        }
        let images: Vec<NcPoly> = hom
            .source
            .relations
            .iter()
            .map(|r| r.substitute(&hom.images, false))
            .collect::<Result<_>>()?;
        Ok(self.check_zero(
            &format!(
                "{} → {} respects relations",
                hom.source.name, self.presentation.name
            ),
            &images,
        ))
    }

    /// Left inverse of the generator matrix in `B(w)`.
    pub fn check_left_inverse(&self, polar: &MultilinearForm) -> Result<CheckItem> {
        let w = self
            .presentation
            .provenance
            .form
            .as_ref()
            .ok_or(Error::NoStructure)?;
        if !polar.is_polar_of(w) {
            return Err(Error::NotInPolar);
        }
        let n = w.dim();
        let a = Family::A;
        let mut polys = Vec::new();
        for mu in 1..=n {
            for nu in 1..=n {
                let mut p = NcPoly::constant(-Scalar::delta(mu, nu));
                for sigma in 1..=n {
                    let left = polar_expression(polar, w, a, mu, sigma, false);
                    p = &p + &(&left * &NcPoly::generator(g(a, sigma, nu)));
                }
                polys.push(p);
            }
        }
        Ok(self.check_zero("left inverse of the generator matrix", &polys))
    }
}

fn judge_poly(sys: &RewriteSystem, p: &NcPoly) -> Result<Judgement> {
    let d = p.degree();
    let bound = sys.complete_through();
    if sys.is_saturated() {
        let nf = sys.saturated_normal_form(p)?;
        return Ok(if nf.is_zero() {
            Judgement::Zero
        } else {
            Judgement::Refuted(format!("leaves {nf}"))
        });
    }
    if d > bound {
        return Ok(Judgement::Open(format!("needs degree {d} > {bound}")));
    }
    let nf = sys.normal_form(p)?;
    Ok(if nf.is_zero() {
        Judgement::Zero
    } else {
        Judgement::Open(format!("leaves {nf} at degree {bound}"))
    })
}

type WordCache = BTreeMap<Word, NcPoly>;

/// `t ∈ I⊗A + A⊗I`, decided by reducing both tensor factors.
fn judge_tensor(
    sys: &RewriteSystem,
    t: &TensorSquareElement,
    d: usize,
    cache: &mut WordCache,
) -> Result<Judgement> {
    let bound = sys.complete_through();
    let saturated = sys.is_saturated();
    if d > bound && !saturated {
        return Ok(Judgement::Open(format!("has degree {d} > {bound}")));
    }
    let reduced = t.map_factors(|w| {
        if let Some(hit) = cache.get(w) {
            return Ok(hit.clone());
        }
        let p = NcPoly::word(w.clone());
        let nf = if saturated {
            sys.saturated_normal_form(&p)?
        } else {
            sys.normal_form(&p)?
        };
        cache.insert(w.clone(), nf.clone());
        Ok(nf)
    })?;
    Ok(if reduced.is_zero() {
        Judgement::Zero
    } else if saturated {
        Judgement::Refuted(format!("leaves {reduced}"))
    } else {
        Judgement::Open(format!("leaves {reduced} at degree {bound}"))
    })
}

/// Counit applied to each relation vanishes exactly.
pub fn check_counit(p: &Presentation) -> Result<CheckItem> {
    let st = p.structure()?;
    let mut outcomes = Vec::new();
    for (i, r) in p.relations.iter().enumerate() {
        let v = r.evaluate(&st.counit)?;
        outcomes.push((
            r.degree(),
            Ok(if v.is_zero() {
                None
            } else {
                Some(format!("relation #{} evaluates to {v}: {r}", i + 1))
            }),
        ));
    }
    Ok(summarize("counit respects relations", outcomes))
}

/// An algebra map out of `source`, given on generators.
#[derive(Clone, Debug)]
pub struct HomCandidate {
    pub source: Presentation,
    pub images: BTreeMap<Generator, NcPoly>,
}

/// Outcome of mapping a presentation into a free algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepresentationReport {
    pub relations: CheckItem,
    /// `(left, right, image of left, image of right)` per requested pair.
    pub witnesses: Vec<(NcPoly, NcPoly, NcPoly, NcPoly)>,
}

impl RepresentationReport {
    /// All relations respected and every witness pair has distinct images.
    pub fn separates(&self) -> bool {
        self.relations.verdict == Verdict::Pass
            && !self.witnesses.is_empty()
            && self.witnesses.iter().all(|(_, _, a, b)| a != b)
    }
}

/// Maps `p` into the free algebra given by `images` and compares the images
/// of each pair in `witnesses`. Equality in a free algebra is exact.
pub fn check_representation(
    p: &Presentation,
    images: &BTreeMap<Generator, NcPoly>,
    witnesses: &[(NcPoly, NcPoly)],
) -> Result<RepresentationReport> {
    let mut outcomes = Vec::new();
    for (i, r) in p.relations.iter().enumerate() {
        let img = r.substitute(images, false)?;
        outcomes.push((
            r.degree(),
            Ok(if img.is_zero() {
                None
            } else {
                Some(format!("relation #{} maps to {img}", i + 1))
            }),
        ));
    }
    let relations = summarize(&format!("representation of {}", p.name), outcomes);
    let mut out = Vec::new();
    for (a, b) in witnesses {
        out.push((
            a.clone(),
            b.clone(),
            a.substitute(images, false)?,
            b.substitute(images, false)?,
        ));
    }
    Ok(RepresentationReport {
        relations,
        witnesses: out,
    })
}

/// `u ↦ I + x·E₁₂ + y·E₁₃`, `s ↦ I − x·E₁₂ − y·E₁₃` into the free algebra on
/// `x`, `y`, for `n ≥ 3`.
pub fn unipotent_witness_images(n: usize) -> BTreeMap<Generator, NcPoly> {
    let x = NcPoly::generator(Generator::free("x"));
    let y = NcPoly::generator(Generator::free("y"));
    let mut images = BTreeMap::new();
    for (fam, sign) in [(Family::U, 1), (Family::S, -1)] {
        for mu in 1..=n {
            for nu in 1..=n {
                let img = if mu == nu {
                    NcPoly::one()
                } else if mu == 1 && nu == 2 {
                    x.scale(&Scalar::from_int(sign))
                } else if mu == 1 && nu == 3 {
                    y.scale(&Scalar::from_int(sign))
                } else {
                    NcPoly::zero()
                };
                images.insert(g(fam, mu, nu), img);
            }
        }
    }
    images
}

/// The commutator pair `(g¹₂g¹₃, g¹₃g¹₂)` in a family.
pub fn commutator_pair(family: Family) -> (NcPoly, NcPoly) {
    (
        NcPoly::monomial([g(family, 1, 2), g(family, 1, 3)]),
        NcPoly::monomial([g(family, 1, 3), g(family, 1, 2)]),
    )
}

/// Identity families holding in `H(w)` for a polar element `w̃`.
pub fn universal_identities(
    w: &MultilinearForm,
    polar: &MultilinearForm,
) -> Result<Vec<(String, Vec<NcPoly>)>> {
    let q = w.require_preregular()?;
    let qinv = q.inverse()?;
    if !polar.is_polar_of(w) {
        return Err(Error::NotInPolar);
    }
    let n = w.dim();
    let m = w.arity();
    let (u, s) = (Family::U, Family::S);
    let mut out = Vec::new();

    let mut sinw = Vec::new();
    for nu in index_tuples(n, m) {
        let mut p = NcPoly::constant(-w.get(&nu));
        for (mu, c) in w.entries() {
            let word: Word = (0..m).rev().map(|k| g(s, mu[k], nu[k])).collect();
            p.add_term(word, c);
        }
        sinw.push(p);
    }
    out.push(("s-invariance".to_string(), sinw));

    let mut su = Vec::new();
    let mut tsu = Vec::new();
    let mut rsu = Vec::new();
    let mut rus = Vec::new();
    for mu in 1..=n {
        for nu in 1..=n {
            let mut p = NcPoly::constant(-Scalar::delta(mu, nu));
            for rho in 1..=n {
                p.add_term(Word(vec![g(s, mu, rho), g(u, rho, nu)]), &Scalar::one());
            }
            su.push(p);

            let mut p = NcPoly::constant(-Scalar::delta(mu, nu));
            for l in 1..=n {
                for tau in 1..=n {
                    let a = &q[(tau - 1, l - 1)];
                    if a.is_zero() {
                        continue;
                    }
                    for rho in 1..=n {
                        let b = &qinv[(mu - 1, rho - 1)];
                        if !b.is_zero() {
                            p.add_term(Word(vec![g(s, l, nu), g(u, rho, tau)]), &(a * b));
                        }
                    }
                }
            }
            tsu.push(p);

            let sg = NcPoly::generator(g(s, mu, nu));
            rsu.push(&sg - &polar_expression(polar, w, u, mu, nu, false));

            let mut lhs = NcPoly::zero();
            for tau in 1..=n {
                let a = &q[(tau - 1, nu - 1)];
                if a.is_zero() {
                    continue;
                }
                for rho in 1..=n {
                    let b = &qinv[(mu - 1, rho - 1)];
                    if !b.is_zero() {
                        lhs.add_term(Word::letter(g(u, rho, tau)), &(a * b));
                    }
                }
            }
            rus.push(&lhs - &polar_expression(polar, w, s, mu, nu, true));
        }
    }
    out.push(("s·u = 1".to_string(), su));
    out.push(("twisted s·u = 1".to_string(), tsu));
    out.push(("s from u via the polar".to_string(), rsu));
    out.push(("twisted u from s via the polar".to_string(), rus));
    Ok(out)
}

/// `Σ w_{λρμ₃…μ_m} s^{μ_m}_{ν_m}…s^{μ₃}_{ν₃} − Σ w_{ν₁…ν_m} u^{ν₁}_λ u^{ν₂}_ρ`.
pub fn quadratic_identities(w: &MultilinearForm) -> Result<Vec<NcPoly>> {
    let m = w.arity();
    if m < 3 {
        return Err(Error::Invalid("needs arity at least 3".into()));
    }
    let n = w.dim();
    let (u, s) = (Family::U, Family::S);
    let mut out = Vec::new();
    for l in 1..=n {
        for r in 1..=n {
            for tail in index_tuples(n, m - 2) {
                let mut p = NcPoly::zero();
                for (idx, c) in w.entries() {
                    if idx[0] == l && idx[1] == r {
                        let word: Word = (2..m).rev().map(|k| g(s, idx[k], tail[k - 2])).collect();
                        p.add_term(word, c);
                    }
                    if idx[2..] == tail[..] {
                        p.add_term(Word(vec![g(u, idx[0], l), g(u, idx[1], r)]), &-c);
                    }
                }
                out.push(p);
            }
        }
    }
    Ok(out)
}

/// Column commutation `u^λ_ν u^μ_ν − u^μ_ν u^λ_ν` and the cross relations
/// `[u^λ_ν, u^μ_ρ] − [u^μ_ν, u^λ_ρ]`.
pub fn manin_identities(n: usize) -> (Vec<NcPoly>, Vec<NcPoly>) {
    let u = |a: usize, b: usize| NcPoly::generator(g(Family::U, a, b));
    let comm = |x: &NcPoly, y: &NcPoly| &(x * y) - &(y * x);
    let mut cols = Vec::new();
    let mut cross = Vec::new();
    for l in 1..=n {
        for mu in 1..=n {
            for nu in 1..=n {
                cols.push(comm(&u(l, nu), &u(mu, nu)));
                for rho in 1..=n {
                    cross.push(&comm(&u(l, nu), &u(mu, rho)) - &comm(&u(mu, nu), &u(l, rho)));
                }
            }
        }
    }
    (cols, cross)
}

/// `s^λ_μ − (u^μ_λ)^{m−1}`.
pub fn power_antipode_identities(n: usize, m: usize) -> Vec<NcPoly> {
    let mut out = Vec::new();
    for l in 1..=n {
        for mu in 1..=n {
            out.push(
                &NcPoly::generator(g(Family::S, l, mu))
                    - &NcPoly::monomial(vec![g(Family::U, mu, l); m - 1]),
            );
        }
    }
    out
}

/// `u ↦ v`, `s ↦` the polar expression in `v` (the antipode of `H(w,w̃)`).
pub fn universal_to_polar_images(
    w: &MultilinearForm,
    polar: &MultilinearForm,
) -> BTreeMap<Generator, NcPoly> {
    let n = w.dim();
    let mut images = BTreeMap::new();
    for mu in 1..=n {
        for nu in 1..=n {
            images.insert(
                g(Family::U, mu, nu),
                NcPoly::generator(g(Family::V, mu, nu)),
            );
            images.insert(
                g(Family::S, mu, nu),
                polar_expression(polar, w, Family::V, mu, nu, false),
            );
        }
    }
    images
}

/// `u ↦ a`, `s^λ_μ ↦ (a^μ_λ)^{m−1}`.
pub fn universal_to_reflection_images(n: usize, m: usize) -> BTreeMap<Generator, NcPoly> {
    let mut images = BTreeMap::new();
    for mu in 1..=n {
        for nu in 1..=n {
            images.insert(
                g(Family::U, mu, nu),
                NcPoly::generator(g(Family::A, mu, nu)),
            );
            images.insert(
                g(Family::S, mu, nu),
                NcPoly::monomial(vec![g(Family::A, nu, mu); m - 1]),
            );
        }
    }
    images
}

/// Generator renaming between matric families.
pub fn rename_images(from: Family, to: Family, n: usize) -> BTreeMap<Generator, NcPoly> {
    let mut images = BTreeMap::new();
    for mu in 1..=n {
        for nu in 1..=n {
            images.insert(g(from, mu, nu), NcPoly::generator(g(to, mu, nu)));
        }
    }
    images
}

/// `u ↦ u`, `s ↦` the antipode of `H(b)`.
pub fn universal_to_bilinear_images(hb: &Presentation) -> Result<BTreeMap<Generator, NcPoly>> {
    let st = hb.structure()?;
    let s = st.antipode.as_ref().ok_or(Error::NoStructure)?;
    let n = hb.n;
    let mut images = rename_images(Family::U, Family::U, n);
    for mu in 1..=n {
        for nu in 1..=n {
            let img = s
                .get(&g(Family::U, mu, nu))
                .ok_or_else(|| Error::MissingImage(format!("u[{mu},{nu}]")))?;
            images.insert(g(Family::S, mu, nu), img.clone());
        }
    }
    Ok(images)
}

/// The polar samples used by the identity suites: the particular solution,
/// then the particular solution plus the first kernel vector.
pub fn polar_samples(w: &MultilinearForm) -> Result<Vec<MultilinearForm>> {
    let sol = w
        .polar()
        .ok_or_else(|| Error::NotPreregular("no polar: form is degenerate".into()))?;
    let mut out = vec![sol.particular.clone()];
    if sol.dimension() > 0 {
        out.push(sol.member(&[Scalar::one()]));
    }
    Ok(out)
}

/// Identity suite for `H(w)` across the given polar samples, including the
/// check that the polar expression for `s` has the same normal form for
/// every sample.
pub fn universal_suite(v: &Verifier, polars: &[MultilinearForm]) -> Result<Report> {
    let w = v
        .presentation()
        .provenance
        .form
        .clone()
        .ok_or(Error::NoStructure)?;
    let mut report = Report::new(format!("derived identities in {}", v.presentation().name));
    let mut reference: Option<Vec<NcPoly>> = None;
    for (k, polar) in polars.iter().enumerate() {
        for (name, polys) in universal_identities(&w, polar)? {
            report.push(v.check_zero(&format!("{name} [polar sample {}]", k + 1), &polys));
        }
        if polars.len() > 1 && w.arity() <= v.degree() {
            let n = w.dim();
            let mut nfs = Vec::new();
            for mu in 1..=n {
                for nu in 1..=n {
                    nfs.push(v.normal_form(&polar_expression(
                        polar,
                        &w,
                        Family::U,
                        mu,
                        nu,
                        false,
                    ))?);
                }
            }
            match &reference {
                None => reference = Some(nfs),
                Some(r) => report.push(CheckItem {
                    name: format!("polar expression independent of sample [sample {}]", k + 1),
                    verdict: if *r == nfs {
                        Verdict::Pass
                    } else {
                        Verdict::Fail
                    },
                    instances: nfs.len(),
                    degree: w.arity() - 1,
                    detail: String::new(),
                }),
            }
        }
    }
    Ok(report)
}

/// `H(θ) ⇄ A_h^m(n)` for the orthogonal form `θ`: both homomorphisms and
/// `s^λ_μ = (u^μ_λ)^{m−1}` in `H(θ)`.
pub fn reflection_isomorphism(
    n: usize,
    m: usize,
    degree: usize,
    strategy: Strategy,
) -> Result<Report> {
    let theta = MultilinearForm::orthogonal(n, m)?;
    let hw = build_hw(&theta)?;
    let ah = build_ahmn(m, n)?;
    let in_ah = Verifier::with_strategy(ah.clone(), degree, strategy)?;
    let in_hw = Verifier::with_strategy(hw.clone(), degree, strategy)?;
    let mut report = Report::new(format!("{} ≅ {}", hw.name, ah.name));
    report.push(in_ah.check_hom(&HomCandidate {
        source: hw,
        images: universal_to_reflection_images(n, m),
    })?);
    report.push(in_hw.check_hom(&HomCandidate {
        source: ah,
        images: rename_images(Family::A, Family::U, n),
    })?);
    report.push(in_hw.check_zero("s^λ_μ = (u^μ_λ)^(m-1)", &power_antipode_identities(n, m)));
    Ok(report)
}

/// `H(w) ⇄ H(b)` for a bilinear form: both homomorphisms and both
/// composites fixing the generators.
pub fn bilinear_identification(
    b: &MultilinearForm,
    degree: usize,
    strategy: Strategy,
) -> Result<Report> {
    let hb = build_hb(b)?;
    let hw = build_hw(b)?;
    let in_hb = Verifier::with_strategy(hb.clone(), degree, strategy)?;
    let in_hw = Verifier::with_strategy(hw.clone(), degree, strategy)?;
    let forward = universal_to_bilinear_images(&hb)?;
    let backward = rename_images(Family::U, Family::U, b.dim());
    let drift = |source: &Presentation,
                 there: &BTreeMap<Generator, NcPoly>,
                 back: &BTreeMap<Generator, NcPoly>|
     -> Result<Vec<NcPoly>> {
        source
            .alphabet
            .iter()
            .map(|g| {
                let image = there
                    .get(g)
                    .ok_or_else(|| Error::MissingImage(g.to_string()))?;
                Ok(&image.substitute(back, false)? - &NcPoly::generator(g.clone()))
            })
            .collect()
    };
    let mut report = Report::new(format!("{} ≅ {}", hw.name, hb.name));
    report.push(in_hb.check_hom(&HomCandidate {
        source: hw.clone(),
        images: forward.clone(),
    })?);
    report.push(in_hw.check_hom(&HomCandidate {
        source: hb.clone(),
        images: backward.clone(),
    })?);
    report.push(in_hw.check_zero(
        &format!("{} → {} → {} fixes generators", hw.name, hb.name, hw.name),
        &drift(&hw, &forward, &backward)?,
    ));
    report.push(in_hb.check_zero(
        &format!("{} → {} → {} fixes generators", hb.name, hw.name, hb.name),
        &drift(&hb, &backward, &forward)?,
    ));
    Ok(report)
}

/// Verdict of the noninjectivity probe.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProbeVerdict {
    NoninjectiveCertified { degree: usize },
    Inconclusive { degree: usize, reason: String },
}

impl fmt::Display for ProbeVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProbeVerdict::NoninjectiveCertified { degree } => {
                write!(
                    f,
                    "noninjective certified (commutator vanishes at degree {degree})"
                )
            }
            ProbeVerdict::Inconclusive { degree, reason } => {
                write!(f, "inconclusive at D={degree}: {reason}")
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct ProbeReport {
    pub witness: RepresentationReport,
    pub commutator_residue: Option<NcPoly>,
    pub verdict: ProbeVerdict,
}

/// The canonical map `H(w) → H(w,w̃)` for a signature form: the universal
/// algebra is separated by an explicit noncommutative representation, and
/// the image of the separating commutator is tested for vanishing.
pub fn noninjectivity_probe(
    w: &MultilinearForm,
    polar: &MultilinearForm,
    degree: usize,
) -> Result<ProbeReport> {
    if w.dim() < 3 {
        return Err(Error::Invalid("probe needs dimension at least 3".into()));
    }
    let hw = build_hw(w)?;
    let (l, r) = commutator_pair(Family::U);
    let witness = check_representation(&hw, &unipotent_witness_images(w.dim()), &[(l, r)])?;
    let target = build_hww(w, polar)?;
    let (vl, vr) = commutator_pair(Family::V);
    let commutator = &vl - &vr;
    let inconclusive = |reason: String| ProbeVerdict::Inconclusive { degree, reason };
    if !witness.separates() {
        return Ok(ProbeReport {
            witness,
            commutator_residue: None,
            verdict: inconclusive("representation witness does not separate".into()),
        });
    }
    if degree < target.max_relation_degree() {
        return Ok(ProbeReport {
            witness,
            commutator_residue: None,
            verdict: inconclusive(format!(
                "degree below the relation degree {}",
                target.max_relation_degree()
            )),
        });
    }
    let v = Verifier::new(target, degree)?;
    let nf = v.normal_form(&commutator)?;
    let item = v.check_zero("commutator vanishes", &[commutator]);
    let verdict = match item.verdict {
        Verdict::Pass => ProbeVerdict::NoninjectiveCertified { degree },
        Verdict::Fail => inconclusive(format!("commutator is nonzero: {}", item.detail)),
        Verdict::Uncertified => inconclusive(format!("commutator has normal form {nf}")),
    };
    Ok(ProbeReport {
        witness,
        commutator_residue: Some(nf),
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> NcPoly {
        s.parse().unwrap()
    }

    #[test]
    fn bw_relation_shapes() {
        let eps = MultilinearForm::signature(3, 3).unwrap();
        let b = build_bw(&eps).unwrap();
        assert_eq!(b.alphabet.len(), 9);
        // (1,2,3): Σ sgn(σ) a^{σ1}_1 a^{σ2}_2 a^{σ3}_3 − 1
        let expected = p(
            "a[1,1]*a[2,2]*a[3,3]-a[1,1]*a[3,2]*a[2,3]-a[2,1]*a[1,2]*a[3,3]\
            +a[2,1]*a[3,2]*a[1,3]+a[3,1]*a[1,2]*a[2,3]-a[3,1]*a[2,2]*a[1,3]-1",
        );
        assert!(b.relations.contains(&expected));
        let rel112 = p(
            "a[1,1]*a[2,1]*a[3,2]-a[1,1]*a[3,1]*a[2,2]-a[2,1]*a[1,1]*a[3,2]\
            +a[2,1]*a[3,1]*a[1,2]+a[3,1]*a[1,1]*a[2,2]-a[3,1]*a[2,1]*a[1,2]",
        );
        assert!(b.relations.contains(&rel112));
        assert!(build_bw(&MultilinearForm::new(2, 3).unwrap()).is_err());
    }

    #[test]
    fn hb_shapes() {
        let b = MultilinearForm::symplectic2();
        let h = build_hb(&b).unwrap();
        assert!(h.relations.contains(&p("u[1,1]*u[2,2]-u[2,1]*u[1,2]-1")));
        assert!(h.relations.contains(&p("-u[1,1]*u[2,2]+u[1,2]*u[2,1]+1")));
        let s = h.structure.as_ref().unwrap().antipode.as_ref().unwrap();
        assert_eq!(s[&Generator::u(1, 1)], p("u[2,2]"));
        assert_eq!(s[&Generator::u(1, 2)], p("-u[1,2]"));
    }

    #[test]
    fn hw_shapes() {
        let h = build_hw(&MultilinearForm::cyclic2()).unwrap();
        assert_eq!(h.alphabet.len(), 8);
        let eps = build_hw(&MultilinearForm::signature(3, 3).unwrap()).unwrap();
        assert_eq!(eps.alphabet.len(), 18);
        let with_constant = eps
            .relations
            .iter()
            .filter(|r| r.degree() == 3 && !r.coefficient(&Word::one()).is_zero())
            .count();
        assert_eq!(with_constant, 6);
        // antisymmetric bilinear form: twisted relation collapses
        let hb = build_hw(&MultilinearForm::symplectic2()).unwrap();
        assert!(hb.relations.contains(&p("u[1,2]*s[1,1]+u[2,2]*s[1,2]")));
        assert!(build_hw(&MultilinearForm::new(2, 3).unwrap()).is_err());
    }

    #[test]
    fn hww_and_ahmn_shapes() {
        let eps = MultilinearForm::signature(3, 3).unwrap();
        let half = eps.scale(&Scalar::ratio(1, 2));
        let h = build_hww(&eps, &half).unwrap();
        assert_eq!(h.alphabet.len(), 9);
        assert!(matches!(
            build_hww(&eps, &MultilinearForm::new(3, 3).unwrap()),
            Err(Error::NotInPolar)
        ));
        let a = build_ahmn(3, 2).unwrap();
        assert_eq!(a.relations.iter().filter(|r| r.degree() == 2).count(), 8);
        assert_eq!(a.relations.iter().filter(|r| r.degree() == 3).count(), 4);
        let s = a.structure.as_ref().unwrap().antipode.as_ref().unwrap();
        assert_eq!(s[&Generator::a(1, 2)], p("a[2,1]^2"));
        assert!(check_counit(&a).unwrap().verdict == Verdict::Pass);
    }

    #[test]
    fn witness_representation() {
        let eps = MultilinearForm::signature(3, 3).unwrap();
        let h = build_hw(&eps).unwrap();
        let (l, r) = commutator_pair(Family::U);
        let rep = check_representation(&h, &unipotent_witness_images(3), &[(l, r)]).unwrap();
        assert_eq!(rep.relations.verdict, Verdict::Pass);
        assert_eq!(rep.witnesses[0].2, p("x*y"));
        assert_eq!(rep.witnesses[0].3, p("y*x"));
        assert!(rep.separates());
    }

    #[test]
    fn counit_as_scalar_representation() {
        let h = build_hw(&MultilinearForm::cyclic2()).unwrap();
        let images: BTreeMap<Generator, NcPoly> = h
            .structure
            .as_ref()
            .unwrap()
            .counit
            .iter()
            .map(|(g, c)| (g.clone(), NcPoly::constant(c.clone())))
            .collect();
        let rep = check_representation(&h, &images, &[]).unwrap();
        assert_eq!(rep.relations.verdict, Verdict::Pass);
    }

    #[test]
    fn bilinear_axioms() {
        let hb = build_hb(&MultilinearForm::symplectic2()).unwrap();
        let v = Verifier::new(hb, 4).unwrap();
        let report = v.axioms().unwrap();
        assert!(report.passed(), "{report}");
    }

    #[test]
    fn verdict_combination() {
        use Verdict::*;
        assert_eq!(Pass.combine(Uncertified), Uncertified);
        assert_eq!(Uncertified.combine(Fail), Fail);
        assert_eq!(Pass.combine(Pass), Pass);
    }
}
