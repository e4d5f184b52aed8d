//! Multilinear forms on `V = ℚ^n`: nondegeneracy, twisted cyclicity, polar
//! spaces and the standard examples.
//!
//! Components are indexed by 1-based tuples `(λ₁,…,λ_m)`. A form stores only
//! its nonzero components. The same type also holds elements of `V^{⊗m}`
//! (upper-index tensors such as a polar member w̃), since both are just
//! order-m arrays of scalars.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::exactnum::{Matrix, Scalar};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultilinearForm {
    dim: usize,
    arity: usize,
    entries: BTreeMap<Vec<usize>, Scalar>,
}

/// Outcome of solving the twisted-cyclicity equations for `Q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TwistSolution {
    Unique(Matrix),
    /// No `Q` satisfies the equations.
    Inconsistent,
    /// The solution space has positive dimension; `example` is one solution.
    Ambiguous {
        dimension: usize,
        example: Matrix,
    },
}

impl TwistSolution {
    pub fn unique(&self) -> Option<&Matrix> {
        match self {
            TwistSolution::Unique(q) => Some(q),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistReport {
    pub nondegenerate: bool,
    pub twist: TwistSolution,
    /// The twisting element, present when it is unique.
    pub q: Option<Matrix>,
    pub q_invertible: bool,
    pub preregular: bool,
}

/// The polar affine space `Aff(w)` as a particular solution plus a kernel
/// basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolarSolution {
    pub particular: MultilinearForm,
    pub kernel_basis: Vec<MultilinearForm>,
}

impl PolarSolution {
    pub fn dimension(&self) -> usize {
        self.kernel_basis.len()
    }

    /// `particular + Σ cᵢ·kernelᵢ`; missing coefficients count as zero.
    pub fn member(&self, coeffs: &[Scalar]) -> MultilinearForm {
        let mut out = self.particular.clone();
        for (k, c) in self.kernel_basis.iter().zip(coeffs) {
            out = out.add(&k.scale(c));
        }
        out
    }
}

impl MultilinearForm {
    pub fn new(dim: usize, arity: usize) -> Result<Self> {
        if dim < 1 || arity < 1 {
            return Err(Error::InvalidForm(format!(
                "dimension {dim} and arity {arity} must be positive"
            )));
        }
        Ok(MultilinearForm {
            dim,
            arity,
            entries: BTreeMap::new(),
        })
    }

    /// Builds a form from `(index tuple, coefficient)` pairs. Duplicate tuples
    /// are rejected; zero coefficients are dropped.
    pub fn from_entries<I>(dim: usize, arity: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<usize>, Scalar)>,
    {
        let mut w = MultilinearForm::new(dim, arity)?;
        let mut seen = std::collections::BTreeSet::new();
        for (idx, c) in entries {
            w.check_index(&idx)?;
            if !seen.insert(idx.clone()) {
                return Err(Error::InvalidForm(format!("duplicate entry {idx:?}")));
            }
            w.set(idx, c)?;
        }
        Ok(w)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Nonzero components in increasing tuple order.
    pub fn entries(&self) -> impl Iterator<Item = (&[usize], &Scalar)> {
        self.entries.iter().map(|(k, v)| (k.as_slice(), v))
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, idx: &[usize]) -> Scalar {
        self.entries.get(idx).cloned().unwrap_or_default()
    }

    pub fn set(&mut self, idx: Vec<usize>, c: Scalar) -> Result<()> {
        self.check_index(&idx)?;
        if c.is_zero() {
            self.entries.remove(&idx);
        } else {
            self.entries.insert(idx, c);
        }
        Ok(())
    }

    fn check_index(&self, idx: &[usize]) -> Result<()> {
        if idx.len() != self.arity {
            return Err(Error::InvalidForm(format!(
                "index {idx:?} has length {} but arity is {}",
                idx.len(),
                self.arity
            )));
        }
        if idx.iter().any(|&i| i < 1 || i > self.dim) {
            return Err(Error::InvalidForm(format!(
                "index {idx:?} out of range 1..={}",
                self.dim
            )));
        }
        Ok(())
    }

    pub fn scale(&self, c: &Scalar) -> MultilinearForm {
        let mut out = MultilinearForm {
            dim: self.dim,
            arity: self.arity,
            entries: BTreeMap::new(),
        };
        if !c.is_zero() {
            for (k, v) in &self.entries {
                out.entries.insert(k.clone(), v * c);
            }
        }
        out
    }

    /// Componentwise sum; panics on a shape mismatch.
    pub fn add(&self, other: &MultilinearForm) -> MultilinearForm {
        assert_eq!((self.dim, self.arity), (other.dim, other.arity));
        let mut out = self.clone();
        for (k, v) in &other.entries {
            let s = out.get(k) + v;
            out.set(k.clone(), s).expect("shape checked");
        }
        out
    }

    /// All index tuples in lexicographic order, 1-based.
    pub fn all_indices(&self) -> impl Iterator<Item = Vec<usize>> {
        index_tuples(self.dim, self.arity)
    }

    pub fn to_dense(&self) -> Vec<Scalar> {
        let mut d = vec![Scalar::zero(); self.dim.pow(self.arity as u32)];
        for (k, v) in &self.entries {
            d[linear_index(self.dim, k)] = v.clone();
        }
        d
    }

    fn from_dense(dim: usize, arity: usize, dense: &[Scalar]) -> MultilinearForm {
        let mut out = MultilinearForm {
            dim,
            arity,
            entries: BTreeMap::new(),
        };
        for (i, idx) in index_tuples(dim, arity).enumerate() {
            if !dense[i].is_zero() {
                out.entries.insert(idx, dense[i].clone());
            }
        }
        out
    }

    /// The `n^{m-1} × n` matrix with the chosen slot (0-based) as column
    /// index and the remaining slots, in order, as row multi-index.
    pub fn flattening(&self, slot: usize) -> Matrix {
        let n = self.dim;
        let mut m = Matrix::zeros(n.pow(self.arity as u32 - 1), n);
        for (k, v) in &self.entries {
            let rest: Vec<usize> = k
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != slot)
                .map(|(_, &x)| x)
                .collect();
            m[(linear_index(n, &rest), k[slot] - 1)] = v.clone();
        }
        m
    }

    /// Condition (i): no nonzero `X` annihilates `w` in the last slot.
    pub fn is_one_site_nondegenerate(&self) -> bool {
        self.flattening(self.arity - 1).rank() == self.dim
    }

    /// Nondegeneracy in every slot.
    pub fn check_condition_i_prime(&self) -> bool {
        (0..self.arity).all(|s| self.flattening(s).rank() == self.dim)
    }

    /// Solves `w_{λ₁…λ_m} = Q^λ_{λ_m} w_{λλ₁…λ_{m−1}}` for the `n²` entries of
    /// `Q`, stored row-major with `Q[(μ-1, ν-1)] = Q^μ_ν`.
    pub fn twisting_element(&self) -> TwistSolution {
        let n = self.dim;
        let m = self.arity;
        let rows = n.pow(m as u32);
        let mut a = Matrix::zeros(rows, n * n);
        let b = self.to_dense();
        for (k, c) in &self.entries {
            // k = (λ, λ₁, …, λ_{m−1}); contributes to every row (λ₁…λ_{m−1}, λ_m).
            let lam = k[0];
            let mut row_idx: Vec<usize> = k[1..].to_vec();
            row_idx.push(1);
            for last in 1..=n {
                row_idx[m - 1] = last;
                let r = linear_index(n, &row_idx);
                let var = (lam - 1) * n + (last - 1);
                a[(r, var)] += c;
            }
        }
        let sol = a.solve_affine(&b).expect("shapes agree");
        let to_matrix = |x: &[Scalar]| {
            let mut q = Matrix::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    q[(i, j)] = x[i * n + j].clone();
                }
            }
            q
        };
        match sol.particular {
            None => TwistSolution::Inconsistent,
            Some(x) if sol.kernel.is_empty() => TwistSolution::Unique(to_matrix(&x)),
            Some(x) => TwistSolution::Ambiguous {
                dimension: sol.kernel.len(),
                example: to_matrix(&x),
            },
        }
    }

    /// Residual of the twisted-cyclicity equations for a given `Q`; zero iff
    /// `Q` is a twisting element.
    pub fn is_twisted_cyclic_with(&self, q: &Matrix) -> bool {
        let n = self.dim;
        self.all_indices().all(|idx| {
            let m = idx.len();
            let mut rhs = Scalar::zero();
            let mut shifted = Vec::with_capacity(m);
            for lam in 1..=n {
                let coeff = &q[(lam - 1, idx[m - 1] - 1)];
                if coeff.is_zero() {
                    continue;
                }
                shifted.clear();
                shifted.push(lam);
                shifted.extend_from_slice(&idx[..m - 1]);
                rhs += &(coeff * self.get(&shifted));
            }
            rhs == self.get(&idx)
        })
    }

    pub fn analyze(&self) -> TwistReport {
        let nondegenerate = self.is_one_site_nondegenerate();
        let twist = self.twisting_element();
        let q = twist.unique().cloned();
        let q_invertible = q.as_ref().is_some_and(|q| q.inverse().is_ok());
        TwistReport {
            nondegenerate,
            preregular: nondegenerate && q_invertible,
            q,
            q_invertible,
            twist,
        }
    }

    /// Twisting element of a preregular form, or an error explaining why not.
    pub fn require_preregular(&self) -> Result<Matrix> {
        let r = self.analyze();
        if !r.nondegenerate {
            return Err(Error::NotPreregular("not 1-site nondegenerate".into()));
        }
        match r.twist {
            TwistSolution::Unique(q) if r.q_invertible => Ok(q),
            TwistSolution::Unique(_) => {
                Err(Error::NotPreregular("twisting element is singular".into()))
            }
            TwistSolution::Inconsistent => Err(Error::NotPreregular("not twisted cyclic".into())),
            TwistSolution::Ambiguous { dimension, .. } => Err(Error::AmbiguousTwist(dimension)),
        }
    }

    /// `C^μ_ν = w̃^{μλ₁…λ_{m−1}} w_{λ₁…λ_{m−1}ν}`, with `self` as w̃.
    pub fn contract_polar(&self, w: &MultilinearForm) -> Matrix {
        contract(self, w, false)
    }

    /// `w̃ ∈ Aff(w)` with `self` as w̃.
    pub fn is_polar_of(&self, w: &MultilinearForm) -> bool {
        self.dim == w.dim
            && self.arity == w.arity
            && self.contract_polar(w) == Matrix::identity(self.dim)
    }

    /// The polar affine space, or `None` when condition (i) fails.
    pub fn polar(&self) -> Option<PolarSolution> {
        let n = self.dim;
        let m = self.arity;
        let unknowns = n.pow(m as u32);
        let mut a = Matrix::zeros(n * n, unknowns);
        let mut b = vec![Scalar::zero(); n * n];
        for mu in 0..n {
            b[mu * n + mu] = Scalar::one();
        }
        let mut var_idx = vec![0usize; m];
        for (k, c) in &self.entries {
            // k = (λ₁, …, λ_{m−1}, ν)
            let nu = k[m - 1];
            var_idx[1..].copy_from_slice(&k[..m - 1]);
            for mu in 1..=n {
                var_idx[0] = mu;
                a[((mu - 1) * n + (nu - 1), linear_index(n, &var_idx))] += c;
            }
        }
        let sol = a.solve_affine(&b).expect("shapes agree");
        let particular = sol.particular?;
        Some(PolarSolution {
            particular: MultilinearForm::from_dense(n, m, &particular),
            kernel_basis: sol
                .kernel
                .iter()
                .map(|k| MultilinearForm::from_dense(n, m, k))
                .collect(),
        })
    }

    /// `w̃^{μλ₁…λ_{m−1}} w_{νλ₁…λ_{m−1}}`, which must equal `Q⁻¹` for a
    /// preregular `w` and any `w̃ ∈ Aff(w)`.
    pub fn q_inverse_from_polar(&self, polar: &MultilinearForm) -> Result<Matrix> {
        if !polar.is_polar_of(self) {
            return Err(Error::NotInPolar);
        }
        let q = self.require_preregular()?;
        let c = contract(polar, self, true);
        let qinv = q.inverse()?;
        if c != qinv {
            return Err(Error::Consistency(format!(
                "polar contraction {c} differs from Q^-1 = {qinv}"
            )));
        }
        Ok(c)
    }

    /// `(g·w)(X₁,…,X_m) = w(gX₁,…,gX_m)`.
    pub fn transform(&self, g: &Matrix) -> Result<MultilinearForm> {
        self.transform_slots(g, self.arity)
    }

    /// Applies `g` to the first `slots` arguments only.
    fn transform_slots(&self, g: &Matrix, slots: usize) -> Result<MultilinearForm> {
        let n = self.dim;
        if g.rows() != n || g.cols() != n {
            return Err(Error::Shape(format!(
                "expected a {n}x{n} matrix, got {}x{}",
                g.rows(),
                g.cols()
            )));
        }
        let mut dense = self.to_dense();
        for slot in 0..slots {
            dense = apply_in_slot(&dense, n, self.arity, slot, g);
        }
        Ok(MultilinearForm::from_dense(n, self.arity, &dense))
    }

    pub fn check_invariance(&self, q: &Matrix) -> Result<bool> {
        Ok(&self.transform(q)? == self)
    }

    /// `π_Q(w)(X₁,…,X_m) = Σ_k w(QX_k,…,QX_m,X₁,…,X_{k−1})` for a
    /// `Q`-invariant `w`.
    pub fn pi_q(&self, q: &Matrix) -> Result<MultilinearForm> {
        if !self.check_invariance(q)? {
            return Err(Error::NotInvariant);
        }
        let n = self.dim;
        let m = self.arity;
        let mut acc = vec![Scalar::zero(); n.pow(m as u32)];
        for k in 1..=m {
            let t = self.transform_slots(q, m - k + 1)?.to_dense();
            for (i, idx) in index_tuples(n, m).enumerate() {
                // T evaluated at (X_k, …, X_m, X_1, …, X_{k−1}).
                let mut rot = idx[k - 1..].to_vec();
                rot.extend_from_slice(&idx[..k - 1]);
                let v = &t[linear_index(n, &rot)];
                if !v.is_zero() {
                    acc[i] += v;
                }
            }
        }
        Ok(MultilinearForm::from_dense(n, m, &acc))
    }

    /// `g·w` for an invertible `g`.
    pub fn base_change(&self, g: &Matrix) -> Result<MultilinearForm> {
        g.inverse()?;
        self.transform(g)
    }

    /// The signature (volume) form on `ℚ^n`; requires `n = m`.
    pub fn signature(n: usize, m: usize) -> Result<MultilinearForm> {
        if n != m {
            return Err(Error::InvalidForm(format!(
                "signature form needs dimension = arity, got {n} and {m}"
            )));
        }
        let mut w = MultilinearForm::new(n, m)?;
        for p in permutations(m) {
            let sign = permutation_sign(&p);
            w.set(p.iter().map(|x| x + 1).collect(), Scalar::from_int(sign))?;
        }
        Ok(w)
    }

    /// The multiple `c·ε` that lies in the polar of the signature form `ε`
    /// of arity `m`: `c = (−1)^(m−1)/(m−1)!`.
    pub fn signature_polar_scale(m: usize) -> Scalar {
        let fact: i64 = (1..m as i64).product::<i64>().max(1);
        let sign = if m.is_multiple_of(2) { -1 } else { 1 };
        Scalar::ratio(sign, fact)
    }

    /// The totally orthogonal form: 1 on constant tuples, 0 elsewhere.
    pub fn orthogonal(n: usize, m: usize) -> Result<MultilinearForm> {
        let mut w = MultilinearForm::new(n, m)?;
        for i in 1..=n {
            w.set(vec![i; m], Scalar::one())?;
        }
        Ok(w)
    }

    /// The bilinear form with `b_{μν} = b[(μ-1, ν-1)]`.
    pub fn bilinear(b: &Matrix) -> Result<MultilinearForm> {
        if !b.is_square() {
            return Err(Error::Shape("bilinear form needs a square matrix".into()));
        }
        let n = b.rows();
        let mut w = MultilinearForm::new(n, 2)?;
        for i in 0..n {
            for j in 0..n {
                w.set(vec![i + 1, j + 1], b[(i, j)].clone())?;
            }
        }
        Ok(w)
    }

    /// The matrix `b_{μν}` of a bilinear form.
    pub fn bilinear_matrix(&self) -> Result<Matrix> {
        if self.arity != 2 {
            return Err(Error::InvalidForm(format!(
                "expected a bilinear form, got arity {}",
                self.arity
            )));
        }
        let n = self.dim;
        let mut b = Matrix::zeros(n, n);
        for (k, v) in &self.entries {
            b[(k[0] - 1, k[1] - 1)] = v.clone();
        }
        Ok(b)
    }

    /// `b₁₂ = 1, b₂₁ = −1` on `ℚ²`.
    pub fn symplectic2() -> MultilinearForm {
        MultilinearForm::bilinear(&Matrix::from_ints(&[&[0, 1], &[-1, 0]])).expect("square")
    }

    /// The cyclic trilinear form on `ℚ²` with `w₁₁₂ = w₁₂₁ = w₂₁₁ = 1`.
    pub fn cyclic2() -> MultilinearForm {
        MultilinearForm::from_entries(
            2,
            3,
            [vec![1, 1, 2], vec![1, 2, 1], vec![2, 1, 1]]
                .into_iter()
                .map(|k| (k, Scalar::one())),
        )
        .expect("valid entries")
    }
}

impl fmt::Debug for MultilinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Form(n={}, m={}, {{", self.dim, self.arity)?;
        for (i, (k, v)) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{k:?}: {v}")?;
        }
        write!(f, "}})")
    }
}

/// Contracts the trailing `m−1` slots of `upper` with either the leading
/// (`lead = false`: `w_{λ…ν}`) or trailing (`lead = true`: `w_{νλ…}`)
/// `m−1` slots of `lower`.
fn contract(upper: &MultilinearForm, lower: &MultilinearForm, lead: bool) -> Matrix {
    let n = upper.dim;
    let m = upper.arity;
    let mut c = Matrix::zeros(n, n);
    for (k, v) in &upper.entries {
        let mu = k[0];
        let tail = &k[1..];
        let mut idx = Vec::with_capacity(m);
        for nu in 1..=n {
            idx.clear();
            if lead {
                idx.push(nu);
                idx.extend_from_slice(tail);
            } else {
                idx.extend_from_slice(tail);
                idx.push(nu);
            }
            let wv = lower.get(&idx);
            if !wv.is_zero() {
                c[(mu - 1, nu - 1)] += &(v * wv);
            }
        }
    }
    c
}

/// `out[…μ…] = Σ_λ t[…λ…]·g^λ_μ` in the given slot.
fn apply_in_slot(t: &[Scalar], n: usize, m: usize, slot: usize, g: &Matrix) -> Vec<Scalar> {
    let stride = n.pow((m - slot - 1) as u32);
    let mut out = vec![Scalar::zero(); t.len()];
    for (i, v) in t.iter().enumerate() {
        if v.is_zero() {
            continue;
        }
        let lam = (i / stride) % n;
        let base = i - lam * stride;
        for mu in 0..n {
            let gv = &g[(lam, mu)];
            if !gv.is_zero() {
                out[base + mu * stride] += &(v * gv);
            }
        }
    }
    out
}

/// Row-major linear index of a 1-based tuple.
pub(crate) fn linear_index(n: usize, idx: &[usize]) -> usize {
    idx.iter().fold(0, |acc, &i| acc * n + (i - 1))
}

/// All 1-based tuples of the given length, lexicographically.
pub fn index_tuples(n: usize, len: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = n.pow(len as u32);
    (0..total).map(move |mut x| {
        let mut idx = vec![0; len];
        for slot in (0..len).rev() {
            idx[slot] = x % n + 1;
            x /= n;
        }
        idx
    })
}

fn permutations(m: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; m], &mut out);
    out
}

fn permutation_sign(p: &[usize]) -> i64 {
    let mut inversions = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}
