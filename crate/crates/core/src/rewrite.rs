//! Degree-truncated Gröbner completion in the free algebra.
//!
//! Rules carry a *sugar*: the degree of the homogeneous element of the
//! ideal they came from. Think of every polynomial as homogenized by a
//! central variable `t`; a rule with leading word `L` and sugar `σ` stands
//! for `t^(σ−|L|)·L − …`. A rule reduces a term `W` of a sugar-`σ'`
//! polynomial only when `L` is a factor of `W` and the rule's ecart
//! `σ − |L|` does not exceed the term's ecart `σ' − |W|`.
//!
//! Completing through degree `D` resolves every overlap and inclusion
//! ambiguity of sugar `≤ D`. The resulting system decides membership of a
//! polynomial `p` with `deg p ≤ D` in
//! `I_D = span{ x·r·y : r a relation, deg(x·r·y) ≤ D }`:
//! `p ∈ I_D` iff the normal form of `p` at level `D` vanishes. Every
//! polynomial of degree `≤ D` that lies in `I_D` lies in the ideal, so a
//! zero normal form is a proof of membership; a nonzero normal form is a
//! statement about `I_D` only.
//!
//! The reduced basis at each degree is unique, so completion output does
//! not depend on the order in which ambiguities are processed.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap, HashMap};
use std::fmt::Write as _;

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::exactnum::Scalar;
use crate::ncalg::{Generator, NcPoly, Word};

type Letter = u16;
type LWord = SmallVec<[Letter; 12]>;
/// `(length, letters)`: tuple order is deglex.
type Key = (usize, LWord);
type Work = BTreeMap<Key, Scalar>;

/// Reduction level at which every rule applies to every term.
const UNBOUNDED: usize = usize::MAX / 4;
/// Largest system for which completion tries to certify saturation after
/// the fact.
const SATURATION_CHECK_LIMIT: usize = 1000;

#[derive(Clone, Debug, PartialEq, Eq)]
struct Rule {
    lead: LWord,
    sugar: usize,
    /// Replacement for `lead`, in decreasing deglex order.
    tail: Vec<(LWord, Scalar)>,
}

impl Rule {
    fn ecart(&self) -> usize {
        self.sugar - self.lead.len()
    }
}

/// A rule as seen from outside: `leading → tail`, valid at ecart
/// `sugar − deg(leading)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleView {
    pub leading: Word,
    pub tail: NcPoly,
    pub sugar: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CompletionStats {
    pub pairs_processed: usize,
    pub pairs_reduced_to_zero: usize,
    /// Ambiguities left unresolved because their sugar exceeds the bound.
    pub pairs_beyond_bound: usize,
    pub rules_created: usize,
}

/// How the degree bound cuts off completion.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Truncation {
    /// Track sugar: the system decides `I_D` exactly.
    #[default]
    Sugar,
    /// Bound only the length of ambiguity words and let every rule reduce
    /// everywhere. Finds more of the ideal below `D` than [`Truncation::Sugar`],
    /// but a nonzero normal form says nothing about `I_D`.
    Word,
}

/// Knobs for [`RewriteSystem::complete_with`].
#[derive(Clone, Debug, Default)]
pub struct CompletionOptions {
    /// Shuffles relation intake and overlap tie-breaks with this seed.
    /// Output must not depend on it.
    pub shuffle_seed: Option<u64>,
    pub truncation: Truncation,
    /// Gives up with [`Error::RuleLimit`] once this many rules exist.
    pub rule_limit: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct RewriteSystem {
    alphabet: Vec<Generator>,
    index: HashMap<Generator, Letter>,
    rules: Vec<Rule>,
    degree_bound: usize,
    complete_through: usize,
    saturated: bool,
    trie: Trie,
    stats: CompletionStats,
}

/// Prefix tree over leading words, one rule per terminal node.
#[derive(Clone, Debug)]
struct Trie {
    width: usize,
    children: Vec<u32>,
    terminal: Vec<Option<u32>>,
}

impl Trie {
    fn new(width: usize) -> Self {
        Trie {
            width: width.max(1),
            children: vec![0; width.max(1)],
            terminal: vec![None],
        }
    }

    fn insert(&mut self, word: &[Letter], rule: u32) {
        let mut node = 0usize;
        for &l in word {
            let slot = node * self.width + l as usize;
            let next = self.children[slot];
            node = if next == 0 {
                let id = self.terminal.len();
                self.terminal.push(None);
                self.children.extend(std::iter::repeat_n(0, self.width));
                self.children[slot] = id as u32;
                id
            } else {
                next as usize
            };
        }
        self.terminal[node] = Some(rule);
    }

    fn get(&self, word: &[Letter]) -> Option<u32> {
        let mut node = 0usize;
        for &l in word {
            let next = self.children[node * self.width + l as usize];
            if next == 0 {
                return None;
            }
            node = next as usize;
        }
        self.terminal[node]
    }
}

#[derive(Clone, Debug)]
enum TaskKind {
    Input(Work),
    /// suffix of `left.lead` of length `overlap` equals a prefix of `right.lead`
    Overlap {
        left: usize,
        right: usize,
        overlap: usize,
    },
    /// `outer.lead = A · inner.lead · C` with `|A| = pos`
    Inclusion {
        outer: usize,
        inner: usize,
        pos: usize,
    },
}

struct Completer {
    width: usize,
    bound: usize,
    rules: Vec<Rule>,
    trie: Trie,
    tasks: Vec<(usize, TaskKind)>,
    heap: BinaryHeap<Reverse<(usize, Key, u64, usize)>>,
    rng: Option<u64>,
    truncation: Truncation,
    rule_limit: Option<usize>,
    stats: CompletionStats,
}

fn splitmix(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl Completer {
    fn push(&mut self, sugar: usize, word: LWord, kind: TaskKind) {
        let id = self.tasks.len();
        let tie = match self.rng.as_mut() {
            Some(state) => splitmix(state),
            None => id as u64,
        };
        self.tasks.push((sugar, kind));
        self.heap
            .push(Reverse((sugar, (word.len(), word), tie, id)));
    }

    fn reduce(&self, work: Work, sugar: usize) -> Work {
        reduce_with(&self.trie, &self.rules, self.width, work, sugar)
    }

    fn add_rule(&mut self, reduced: Work, sugar: usize) {
        let new_id = self.rules.len();
        let mut rule = make_rule(reduced, sugar);
        if self.truncation == Truncation::Word {
            rule.sugar = rule.lead.len();
        }
        self.trie.insert(&rule.lead, new_id as u32);
        self.rules.push(rule);
        self.stats.rules_created += 1;
        self.schedule_pairs(new_id);
    }

    fn schedule_pairs(&mut self, r: usize) {
        let bound = self.bound;
        let mut pending = Vec::new();
        let mut beyond = 0;
        {
            let new = &self.rules[r];
            for (q, old) in self.rules.iter().enumerate() {
                let ecart = new.ecart().max(old.ecart());
                // new · old overlaps (including the self-overlap when q == r)
                let orientations = if q == r { 1 } else { 2 };
                for (left, right, lw, rw) in
                    [(r, q, &new.lead, &old.lead), (q, r, &old.lead, &new.lead)]
                        .into_iter()
                        .take(orientations)
                {
                    let max_o = lw.len().min(rw.len());
                    for o in 1..max_o {
                        if lw[lw.len() - o..] == rw[..o] {
                            let len = lw.len() + rw.len() - o;
                            if ecart + len <= bound {
                                let mut w: LWord = lw.clone();
                                w.extend_from_slice(&rw[o..]);
                                pending.push((
                                    ecart + len,
                                    w,
                                    TaskKind::Overlap {
                                        left,
                                        right,
                                        overlap: o,
                                    },
                                ));
                            } else {
                                beyond += 1;
                            }
                        }
                    }
                }
                if q == r {
                    continue;
                }
                for (outer, inner, ow, iw, ie) in [
                    (r, q, &new.lead, &old.lead, old.ecart()),
                    (q, r, &old.lead, &new.lead, new.ecart()),
                ] {
                    if iw.len() >= ow.len() {
                        continue;
                    }
                    let sugar = ie + ow.len();
                    for pos in 0..=ow.len() - iw.len() {
                        if ow[pos..pos + iw.len()] == iw[..] {
                            if sugar > bound {
                                beyond += 1;
                            } else {
                                pending.push((
                                    sugar,
                                    ow.clone(),
                                    TaskKind::Inclusion { outer, inner, pos },
                                ));
                            }
                        }
                    }
                }
            }
        }
        self.stats.pairs_beyond_bound += beyond;
        for (sugar, w, kind) in pending {
            self.push(sugar, w, kind);
        }
    }

    fn spoly(&self, kind: &TaskKind) -> Work {
        let mut work = Work::new();
        let mut add = |w: LWord, c: Scalar| {
            if c.is_zero() {
                return;
            }
            let key = (w.len(), w);
            let e = work.entry(key).or_insert_with(Scalar::zero);
            *e += &c;
        };
        match kind {
            TaskKind::Input(p) => return p.clone(),
            TaskKind::Overlap {
                left,
                right,
                overlap,
            } => {
                let l = &self.rules[*left];
                let r = &self.rules[*right];
                let c_part = &r.lead[*overlap..];
                let a_part = &l.lead[..l.lead.len() - overlap];
                for (t, c) in &l.tail {
                    let mut w: LWord = t.clone();
                    w.extend_from_slice(c_part);
                    add(w, c.clone());
                }
                for (t, c) in &r.tail {
                    let mut w: LWord = SmallVec::from_slice(a_part);
                    w.extend_from_slice(t);
                    add(w, -c);
                }
            }
            TaskKind::Inclusion { outer, inner, pos } => {
                let o = &self.rules[*outer];
                let i = &self.rules[*inner];
                let a_part = &o.lead[..*pos];
                let c_part = &o.lead[*pos + i.lead.len()..];
                for (t, c) in &o.tail {
                    add(t.clone(), c.clone());
                }
                for (t, c) in &i.tail {
                    let mut w: LWord = SmallVec::from_slice(a_part);
                    w.extend_from_slice(t);
                    w.extend_from_slice(c_part);
                    add(w, -c);
                }
            }
        }
        work.retain(|_, c| !c.is_zero());
        work
    }

    fn run(&mut self) -> Result<()> {
        let mut current = 0;
        while let Some(Reverse((sugar, _, _, id))) = self.heap.pop() {
            if sugar != current {
                if current > 0 {
                    log::info!(
                        "degree {current} done: {} rules, {} pairs processed",
                        self.rules.len(),
                        self.stats.pairs_processed
                    );
                }
                current = sugar;
            }
            let kind = std::mem::replace(&mut self.tasks[id].1, TaskKind::Input(Work::new()));
            let s = self.spoly(&kind);
            self.stats.pairs_processed += 1;
            let reduced = self.reduce(s, sugar);
            if reduced.is_empty() {
                self.stats.pairs_reduced_to_zero += 1;
            } else {
                self.add_rule(reduced, sugar);
                if let Some(limit) = self.rule_limit {
                    if self.rules.len() >= limit {
                        return Err(Error::RuleLimit { limit });
                    }
                }
            }
        }
        if current > 0 {
            log::info!(
                "degree {current} done: {} rules, {} pairs processed",
                self.rules.len(),
                self.stats.pairs_processed
            );
        }
        Ok(())
    }
}

fn make_rule(reduced: Work, sugar: usize) -> Rule {
    let mut terms: Vec<(Key, Scalar)> = reduced.into_iter().collect();
    let ((_, lead), lc) = terms.pop().expect("nonzero polynomial");
    let inv = lc.recip().expect("nonzero");
    let neg_inv = -inv;
    let tail = terms
        .into_iter()
        .rev()
        .map(|((_, w), c)| (w, &c * &neg_inv))
        .collect();
    Rule { lead, sugar, tail }
}

/// Leftmost-shortest applicable rule, as `(rule, start position)`.
fn find_reducer(
    trie: &Trie,
    rules: &[Rule],
    width: usize,
    word: &[Letter],
    ecart: usize,
) -> Option<(usize, usize)> {
    let applicable = |r: u32| rules[r as usize].ecart() <= ecart;
    if let Some(r) = trie.terminal[0] {
        if applicable(r) {
            return Some((r as usize, 0));
        }
    }
    for start in 0..word.len() {
        let mut node = 0usize;
        for &l in &word[start..] {
            let next = trie.children[node * width.max(1) + l as usize];
            if next == 0 {
                break;
            }
            node = next as usize;
            if let Some(r) = trie.terminal[node] {
                if applicable(r) {
                    return Some((r as usize, start));
                }
            }
        }
    }
    None
}

fn has_proper_factor_rule(trie: &Trie, width: usize, word: &[Letter]) -> bool {
    if !word.is_empty() && trie.terminal[0].is_some() {
        return true;
    }
    for start in 0..word.len() {
        let mut node = 0usize;
        for (k, &l) in word[start..].iter().enumerate() {
            let next = trie.children[node * width.max(1) + l as usize];
            if next == 0 {
                break;
            }
            node = next as usize;
            let whole = start == 0 && k + 1 == word.len();
            if !whole && trie.terminal[node].is_some() {
                return true;
            }
        }
    }
    false
}

fn reduce_with(trie: &Trie, rules: &[Rule], width: usize, mut work: Work, sugar: usize) -> Work {
    let mut done: Vec<(Key, Scalar)> = Vec::new();
    while let Some(((len, w), c)) = work.pop_last() {
        match find_reducer(trie, rules, width, &w, sugar - len) {
            None => done.push(((len, w), c)),
            Some((r, start)) => {
                let rule = &rules[r];
                let prefix = &w[..start];
                let suffix = &w[start + rule.lead.len()..];
                for (t, tc) in &rule.tail {
                    let mut nw: LWord =
                        SmallVec::with_capacity(prefix.len() + t.len() + suffix.len());
                    nw.extend_from_slice(prefix);
                    nw.extend_from_slice(t);
                    nw.extend_from_slice(suffix);
                    let add = &c * tc;
                    use std::collections::btree_map::Entry;
                    match work.entry((nw.len(), nw)) {
                        Entry::Vacant(e) => {
                            e.insert(add);
                        }
                        Entry::Occupied(mut e) => {
                            *e.get_mut() += &add;
                            if e.get().is_zero() {
                                e.remove();
                            }
                        }
                    }
                }
            }
        }
    }
    done.into_iter().collect()
}

impl RewriteSystem {
    /// Completes `relations` through degree `bound` over `alphabet` (extended
    /// by any generator occurring in the relations).
    pub fn complete(alphabet: &[Generator], relations: &[NcPoly], bound: usize) -> Result<Self> {
        Self::complete_with(alphabet, relations, bound, &CompletionOptions::default())
    }

    pub fn complete_with(
        alphabet: &[Generator],
        relations: &[NcPoly],
        bound: usize,
        options: &CompletionOptions,
    ) -> Result<Self> {
        let mut gens: BTreeSet<Generator> = alphabet.iter().cloned().collect();
        for r in relations {
            gens.extend(r.generators());
        }
        let alphabet: Vec<Generator> = gens.into_iter().collect();
        if alphabet.len() > Letter::MAX as usize {
            return Err(Error::Invalid("alphabet too large".into()));
        }
        let index: HashMap<Generator, Letter> = alphabet
            .iter()
            .enumerate()
            .map(|(i, g)| (g.clone(), i as Letter))
            .collect();
        let needed = relations.iter().map(NcPoly::degree).max().unwrap_or(0);
        if needed > bound {
            return Err(Error::DegreeTooSmall { bound, needed });
        }
        let width = alphabet.len();
        let mut c = Completer {
            width,
            bound,
            rules: Vec::new(),
            trie: Trie::new(width),
            tasks: Vec::new(),
            heap: BinaryHeap::new(),
            rng: options.shuffle_seed,
            truncation: options.truncation,
            rule_limit: options.rule_limit,
            stats: CompletionStats::default(),
        };
        let mut inputs: Vec<Work> = Vec::new();
        for r in relations {
            if r.is_zero() {
                continue;
            }
            inputs.push(to_work(&index, r)?);
        }
        if let Some(seed) = options.shuffle_seed {
            let mut state = seed ^ 0x5DEE_CE66_D1CE_4E5B;
            for i in (1..inputs.len()).rev() {
                let j = (splitmix(&mut state) % (i as u64 + 1)) as usize;
                inputs.swap(i, j);
            }
        }
        let originals = inputs.clone();
        for w in inputs {
            let (key, _) = w.iter().next_back().expect("nonzero");
            let sugar = key.0;
            let lead = key.1.clone();
            c.push(sugar, lead, TaskKind::Input(w));
        }
        c.run()?;

        let mut sys = RewriteSystem {
            alphabet,
            index,
            rules: c.rules,
            degree_bound: bound,
            complete_through: bound,
            saturated: c.stats.pairs_beyond_bound == 0,
            trie: c.trie,
            stats: c.stats,
        };
        if options.truncation == Truncation::Word {
            sys.drop_redundant();
        }
        sys.interreduce();
        if !sys.saturated && sys.rules.len() <= SATURATION_CHECK_LIMIT {
            sys.saturated = sys.is_complete_basis(&originals);
        }
        Ok(sys)
    }

    /// Diamond-lemma check with no degree limit: every relation reduces to
    /// zero and every ambiguity among the final rules resolves.
    fn is_complete_basis(&self, relations: &[Work]) -> bool {
        let width = self.alphabet.len();
        let reduce = |w: Work| reduce_with(&self.trie, &self.rules, width, w, UNBOUNDED);
        if relations.iter().any(|r| !reduce(r.clone()).is_empty()) {
            return false;
        }
        let mut c = self.replay(UNBOUNDED);
        while let Some(Reverse((_, _, _, id))) = c.heap.pop() {
            if !reduce(c.spoly(&c.tasks[id].1)).is_empty() {
                return false;
            }
        }
        true
    }

    /// A completer holding this system's rules with every ambiguity up to
    /// `bound` scheduled but not processed.
    fn replay(&self, bound: usize) -> Completer {
        let width = self.alphabet.len();
        let mut c = Completer {
            width,
            bound,
            rules: Vec::new(),
            trie: Trie::new(width),
            tasks: Vec::new(),
            heap: BinaryHeap::new(),
            rng: None,
            truncation: Truncation::Sugar,
            rule_limit: None,
            stats: CompletionStats::default(),
        };
        for (i, r) in self.rules.iter().enumerate() {
            c.trie.insert(&r.lead, i as u32);
            c.rules.push(r.clone());
            c.schedule_pairs(i);
        }
        c
    }

    /// Removes rules whose leading word contains another leading word. Only
    /// sound when every rule has ecart zero.
    fn drop_redundant(&mut self) {
        let width = self.alphabet.len();
        let keep: Vec<bool> = self
            .rules
            .iter()
            .map(|r| !has_proper_factor_rule(&self.trie, width, &r.lead))
            .collect();
        let mut k = keep.iter();
        self.rules.retain(|_| *k.next().expect("same length"));
        self.rebuild_trie();
    }

    /// Fully reduces every tail and sorts the rules canonically.
    fn interreduce(&mut self) {
        let width = self.alphabet.len();
        let mut new_rules = Vec::with_capacity(self.rules.len());
        for rule in &self.rules {
            let mut work = Work::new();
            for (t, c) in &rule.tail {
                work.insert((t.len(), t.clone()), c.clone());
            }
            let reduced = reduce_with(&self.trie, &self.rules, width, work, rule.sugar);
            new_rules.push(Rule {
                lead: rule.lead.clone(),
                sugar: rule.sugar,
                tail: reduced
                    .into_iter()
                    .rev()
                    .map(|((_, w), c)| (w, c))
                    .collect(),
            });
        }
        new_rules.sort_by(|a, b| {
            (a.lead.len(), &a.lead, a.sugar).cmp(&(b.lead.len(), &b.lead, b.sugar))
        });
        self.rules = new_rules;
        self.rebuild_trie();
    }

    fn rebuild_trie(&mut self) {
        let mut trie = Trie::new(self.alphabet.len());
        for (i, r) in self.rules.iter().enumerate() {
            trie.insert(&r.lead, i as u32);
        }
        self.trie = trie;
    }

    pub fn alphabet(&self) -> &[Generator] {
        &self.alphabet
    }

    pub fn degree_bound(&self) -> usize {
        self.degree_bound
    }

    pub fn complete_through(&self) -> usize {
        self.complete_through
    }

    /// The rules form a complete Gröbner basis of the ideal and decide
    /// membership at every degree: either no ambiguity was dropped by the
    /// degree bound, or the final rules pass the diamond lemma outright.
    pub fn is_saturated(&self) -> bool {
        self.saturated
    }

    fn max_ecart(&self) -> usize {
        self.rules.iter().map(Rule::ecart).max().unwrap_or(0)
    }

    pub fn stats(&self) -> &CompletionStats {
        &self.stats
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn rules(&self) -> Vec<RuleView> {
        self.rules.iter().map(|r| self.view(r)).collect()
    }

    fn view(&self, r: &Rule) -> RuleView {
        let mut tail = NcPoly::zero();
        for (w, c) in &r.tail {
            tail.add_term(self.word_of(w), c);
        }
        RuleView {
            leading: self.word_of(&r.lead),
            tail,
            sugar: r.sugar,
        }
    }

    fn word_of(&self, w: &[Letter]) -> Word {
        Word(
            w.iter()
                .map(|&l| self.alphabet[l as usize].clone())
                .collect(),
        )
    }

    fn export(&self, work: &Work) -> NcPoly {
        let mut p = NcPoly::zero();
        for ((_, w), c) in work {
            p.add_term(self.word_of(w), c);
        }
        p
    }

    /// Normal form at the completion degree: zero exactly when `p` lies in
    /// the degree-`D` part of the ideal.
    pub fn normal_form(&self, p: &NcPoly) -> Result<NcPoly> {
        let d = p.degree();
        if d > self.complete_through {
            return Err(Error::DegreeBudget {
                degree: d,
                bound: self.complete_through,
            });
        }
        let work = to_work(&self.index, p)?;
        let reduced = reduce_with(
            &self.trie,
            &self.rules,
            self.alphabet.len(),
            work,
            self.complete_through,
        );
        Ok(self.export(&reduced))
    }

    /// Canonical representative of `p` modulo the whole ideal, at any
    /// degree. Only available for a saturated system.
    pub fn saturated_normal_form(&self, p: &NcPoly) -> Result<NcPoly> {
        let d = p.degree();
        if !self.saturated {
            return Err(Error::NotCertified {
                degree: d,
                bound: self.complete_through,
            });
        }
        let work = to_work(&self.index, p)?;
        let level = self.complete_through.max(d + self.max_ecart());
        let reduced = reduce_with(&self.trie, &self.rules, self.alphabet.len(), work, level);
        Ok(self.export(&reduced))
    }

    /// Membership in the degree-`D` part of the ideal. `true` proves
    /// membership in the ideal.
    pub fn ideal_member(&self, p: &NcPoly) -> Result<bool> {
        let d = p.degree();
        if d > self.complete_through {
            return Err(Error::NotCertified {
                degree: d,
                bound: self.complete_through,
            });
        }
        Ok(self.normal_form(p)?.is_zero())
    }

    /// Overlap and inclusion ambiguities of sugar `≤ D` whose two
    /// resolutions differ. Empty for a completed system.
    pub fn unresolved_ambiguities(&self) -> Vec<String> {
        let width = self.alphabet.len();
        let mut c = self.replay(self.complete_through);
        let mut bad = Vec::new();
        while let Some(Reverse((sugar, (_, w), _, id))) = c.heap.pop() {
            let kind = c.tasks[id].1.clone();
            let s = c.spoly(&kind);
            let reduced = reduce_with(&self.trie, &self.rules, width, s, sugar);
            if !reduced.is_empty() {
                bad.push(format!(
                    "{} (sugar {sugar}): {}",
                    self.word_of(&w),
                    self.export(&reduced)
                ));
            }
        }
        bad
    }

    /// Text dump: header comments, then one `lead -> tail` line per rule,
    /// with an `@sugar` suffix when the rule's ecart is positive.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        out.push_str("# rewrite system\n");
        out.push_str("# alphabet:");
        for g in &self.alphabet {
            let _ = write!(out, " {g}");
        }
        out.push('\n');
        let _ = writeln!(out, "# degree: {}", self.complete_through);
        let _ = writeln!(out, "# saturated: {}", self.saturated);
        let _ = writeln!(out, "# rules: {}", self.rules.len());
        for r in &self.rules {
            let v = self.view(r);
            let _ = write!(out, "{} -> {}", v.leading, v.tail);
            if r.ecart() > 0 {
                let _ = write!(out, " @{}", r.sugar);
            }
            out.push('\n');
        }
        out
    }

    /// Reads a dump produced by [`RewriteSystem::dump`].
    pub fn parse_dump(text: &str) -> Result<Self> {
        let mut alphabet: Option<Vec<Generator>> = None;
        let mut degree: Option<usize> = None;
        let mut saturated = false;
        let mut raw: Vec<(usize, NcPoly, NcPoly, Option<usize>)> = Vec::new();
        for (no, line) in text.lines().enumerate() {
            let lineno = no + 1;
            let err = |m: String| Error::Parse(format!("line {lineno}: {m}"));
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(h) = line.strip_prefix('#') {
                let h = h.trim();
                if let Some(a) = h.strip_prefix("alphabet:") {
                    let gens = a
                        .split_whitespace()
                        .map(|g| g.parse::<Generator>())
                        .collect::<Result<Vec<_>>>()
                        .map_err(|e| err(e.to_string()))?;
                    alphabet = Some(gens);
                } else if let Some(v) = h.strip_prefix("saturated:") {
                    saturated = match v.trim() {
                        "true" => true,
                        "false" => false,
                        other => return Err(err(format!("bad saturation flag {other:?}"))),
                    };
                } else if let Some(d) = h.strip_prefix("degree:") {
                    degree = Some(
                        d.trim()
                            .parse()
                            .map_err(|_| err(format!("bad degree {d:?}")))?,
                    );
                }
                continue;
            }
            let (lhs, rhs) = line
                .split_once("->")
                .ok_or_else(|| err("expected `lead -> tail`".into()))?;
            let (rhs, sugar) = match rhs.rsplit_once('@') {
                Some((r, s)) => (
                    r,
                    Some(
                        s.trim()
                            .parse::<usize>()
                            .map_err(|_| err(format!("bad sugar {s:?}")))?,
                    ),
                ),
                None => (rhs, None),
            };
            let lead: NcPoly = lhs.parse().map_err(|e: Error| err(e.to_string()))?;
            let tail: NcPoly = rhs.parse().map_err(|e: Error| err(e.to_string()))?;
            raw.push((lineno, lead, tail, sugar));
        }
        let degree = degree.ok_or_else(|| Error::Parse("missing `# degree:` header".into()))?;
        let mut gens: BTreeSet<Generator> = alphabet.unwrap_or_default().into_iter().collect();
        for (_, l, t, _) in &raw {
            gens.extend(l.generators());
            gens.extend(t.generators());
        }
        let alphabet: Vec<Generator> = gens.into_iter().collect();
        let index: HashMap<Generator, Letter> = alphabet
            .iter()
            .enumerate()
            .map(|(i, g)| (g.clone(), i as Letter))
            .collect();
        let mut rules = Vec::new();
        for (lineno, lead, tail, sugar) in raw {
            let err = |m: &str| Error::Parse(format!("line {lineno}: {m}"));
            if lead.len() != 1 || !lead.leading().is_some_and(|(_, c)| c.is_one()) {
                return Err(err("leading side must be a single word"));
            }
            let lw = lead.leading().expect("one term").0;
            let lead_letters = letters(&index, lw)?;
            for (w, _) in tail.terms() {
                if w >= lw {
                    return Err(err("tail word not below the leading word"));
                }
            }
            let tail_work = to_work(&index, &tail)?;
            let sugar = sugar.unwrap_or(lead_letters.len());
            if sugar < lead_letters.len() || sugar > degree {
                return Err(err("sugar out of range"));
            }
            rules.push(Rule {
                lead: lead_letters,
                sugar,
                tail: tail_work
                    .into_iter()
                    .rev()
                    .map(|((_, w), c)| (w, c))
                    .collect(),
            });
        }
        let mut sys = RewriteSystem {
            trie: Trie::new(alphabet.len()),
            alphabet,
            index,
            rules,
            degree_bound: degree,
            complete_through: degree,
            saturated,
            stats: CompletionStats::default(),
        };
        sys.rules.sort_by(|a, b| {
            (a.lead.len(), &a.lead, a.sugar).cmp(&(b.lead.len(), &b.lead, b.sugar))
        });
        for w in sys.rules.windows(2) {
            if w[0].lead == w[1].lead {
                return Err(Error::Parse("two rules share a leading word".into()));
            }
        }
        sys.rebuild_trie();
        Ok(sys)
    }

    /// Whether `lead` is the leading word of some rule.
    pub fn has_rule_for(&self, lead: &Word) -> bool {
        letters(&self.index, lead).is_ok_and(|l| self.trie.get(&l).is_some())
    }
}

fn letters(index: &HashMap<Generator, Letter>, w: &Word) -> Result<LWord> {
    w.letters()
        .iter()
        .map(|g| {
            index
                .get(g)
                .copied()
                .ok_or_else(|| Error::UnknownGenerator(g.to_string()))
        })
        .collect()
}

fn to_work(index: &HashMap<Generator, Letter>, p: &NcPoly) -> Result<Work> {
    let mut work = Work::new();
    for (w, c) in p.terms() {
        let l = letters(index, w)?;
        work.insert((l.len(), l), c.clone());
    }
    Ok(work)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> NcPoly {
        s.parse().unwrap()
    }

    #[test]
    fn rank_one_inverse_pair() {
        let rels = [p("u[1,1]*s[1,1]-1"), p("s[1,1]*u[1,1]-1")];
        let sys = RewriteSystem::complete(&[], &rels, 4).unwrap();
        assert_eq!(sys.normal_form(&p("u[1,1]*s[1,1]")).unwrap(), p("1"));
        assert_eq!(sys.normal_form(&p("s[1,1]*u[1,1]")).unwrap(), p("1"));
        assert_eq!(
            sys.normal_form(&p("s[1,1]*u[1,1]*u[1,1]*s[1,1]")).unwrap(),
            p("1")
        );
        assert!(sys.unresolved_ambiguities().is_empty());
    }

    #[test]
    fn single_nilpotent() {
        let sys = RewriteSystem::complete(&[], &[p("g^2")], 5).unwrap();
        let rules = sys.rules();
        assert_eq!(rules.len(), 1);
        assert_eq!(rules[0].leading.to_string(), "g*g");
        assert!(rules[0].tail.is_zero());
        assert_eq!(sys.normal_form(&p("g^3+g")).unwrap(), p("g"));
    }

    #[test]
    fn relation_reduces_to_zero() {
        let rels = [p("x*y-y*x-x"), p("y*y-1")];
        let sys = RewriteSystem::complete(&[], &rels, 5).unwrap();
        for r in &rels {
            assert!(sys.ideal_member(r).unwrap());
        }
        assert!(!sys.ideal_member(&p("1")).unwrap_or(true));
    }

    #[test]
    fn low_degree_cancellation_is_not_overextended() {
        // xy and xy − z give z at degree 2, but xz only enters at degree 3.
        let rels = [p("x*y"), p("x*y-z")];
        let d2 = RewriteSystem::complete(&[], &rels, 2).unwrap();
        assert!(d2.ideal_member(&p("z")).unwrap());
        assert!(!d2.ideal_member(&p("x*z")).unwrap());
        let d3 = RewriteSystem::complete(&[], &rels, 3).unwrap();
        assert!(d3.ideal_member(&p("x*z")).unwrap());
        assert!(d2.is_saturated());
        assert!(d2.saturated_normal_form(&p("x*z")).unwrap().is_zero());
        assert_eq!(d2.saturated_normal_form(&p("x^5+z*y")).unwrap(), p("x^5"));
    }

    #[test]
    fn degree_errors() {
        let sys = RewriteSystem::complete(&[], &[p("x^2")], 3).unwrap();
        assert!(matches!(
            sys.ideal_member(&p("x^4")),
            Err(Error::NotCertified {
                degree: 4,
                bound: 3
            })
        ));
        assert!(matches!(
            sys.normal_form(&p("x^4")),
            Err(Error::DegreeBudget { .. })
        ));
        assert!(matches!(
            RewriteSystem::complete(&[], &[p("x^4")], 3),
            Err(Error::DegreeTooSmall {
                bound: 3,
                needed: 4
            })
        ));
        assert!(matches!(
            sys.normal_form(&p("y")),
            Err(Error::UnknownGenerator(_))
        ));
    }

    #[test]
    fn dump_roundtrip() {
        let rels = [p("x*y"), p("x*y-z"), p("y*x-x")];
        let sys = RewriteSystem::complete(&[], &rels, 4).unwrap();
        let text = sys.dump();
        let back = RewriteSystem::parse_dump(&text).unwrap();
        assert_eq!(back.dump(), text);
        for q in ["x*z", "y*x*y", "z*y*x", "x"] {
            assert_eq!(
                back.normal_form(&p(q)).unwrap(),
                sys.normal_form(&p(q)).unwrap()
            );
        }
        assert!(RewriteSystem::parse_dump("x -> y\n").is_err());
    }

    #[test]
    fn constant_relation_collapses() {
        let sys = RewriteSystem::complete(&[], &[p("x*y-1"), p("x*y")], 3).unwrap();
        assert!(sys.ideal_member(&p("1")).unwrap());
        assert!(sys.ideal_member(&p("x*x*y")).unwrap());
    }
}
