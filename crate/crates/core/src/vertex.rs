//! Twisted vertex operators on `S⁻ ⊗ ℂ[R_ℤ(Γ)/Φ]` and relation certifiers.
//!
//! `X(γ, z) = H₊(γ, z) H₋(γ, −z) e_γ̄` is evaluated one component at a time:
//! `X_m(γ) = Σ_{j ≥ 0} q_j(γ) D_{j+m}(γ) e_γ̄` where `D_k` is the `z^{−k}`
//! coefficient of `exp(−Σ_{n odd} (2/n) a_n(γ) z^{−n})`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use serde_json::json;

use crate::error::{FockError, GammaError};
use crate::fock::{monomials_of_degree, FockMonomial, FockSpace, FockVector};
use crate::gamma::{GammaData, VirtualChar};
use crate::lattice::{reduce_mod2, F2Data, LatticeVec, Phase};
use crate::report::CheckReport;
use crate::scalars::{rat, rint, CycScalar, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct TwistedVector {
    terms: BTreeMap<(usize, FockMonomial), CycScalar>,
}

impl TwistedVector {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `1 ⊗ e^{[β]}` for coset `t`.
    pub fn vacuum(t: usize) -> Self {
        Self::basis(t, FockMonomial::one())
    }

    pub fn basis(t: usize, m: FockMonomial) -> Self {
        let mut v = Self::zero();
        v.add_term(t, m, CycScalar::one());
        v
    }

    pub fn from_fock(t: usize, f: &FockVector) -> Self {
        let mut v = Self::zero();
        for (m, c) in f.terms() {
            v.add_term(t, m.clone(), c.clone());
        }
        v
    }

    pub fn terms(&self) -> &BTreeMap<(usize, FockMonomial), CycScalar> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, t: usize, m: FockMonomial, c: CycScalar) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry((t, m)) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let s = e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &TwistedVector, c: &CycScalar) {
        if c.is_zero() {
            return;
        }
        for ((t, m), x) in &other.terms {
            self.add_term(*t, m.clone(), x * c);
        }
    }

    fn add_fock_scaled(&mut self, t: usize, f: &FockVector, c: &CycScalar) {
        for (m, x) in f.terms() {
            self.add_term(t, m.clone(), x * c);
        }
    }

    pub fn sub(&self, other: &TwistedVector) -> TwistedVector {
        let mut out = self.clone();
        out.add_scaled(other, &CycScalar::from_int(-1));
        out
    }

    pub fn scale(&self, c: &CycScalar) -> TwistedVector {
        let mut out = Self::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn cosets(&self) -> Vec<usize> {
        let mut ts: Vec<usize> = self.terms.keys().map(|k| k.0).collect();
        ts.dedup();
        ts
    }

    /// The Fock part living on coset `t`.
    pub fn fock_part(&self, t: usize) -> FockVector {
        let mut f = FockVector::zero();
        for ((s, m), c) in &self.terms {
            if *s == t {
                f.add_term(m.clone(), c.clone());
            }
        }
        f
    }

    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(|k| k.1.degree());
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }
}

impl fmt::Display for TwistedVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let s: Vec<String> = self.terms.iter().map(|((t, m), c)| format!("({c}) {m} e[{t}]")).collect();
        write!(f, "{}", s.join(" + "))
    }
}

/// An operator appearing in a relation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Op {
    /// `X_m(γ)`.
    X(i64, LatticeVec),
    /// `a_m(γ)` for odd `m`.
    A(i64, LatticeVec),
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Op::X(m, g) => write!(f, "X_{m}({g:?})"),
            Op::A(m, g) => write!(f, "a_{m}({g:?})"),
        }
    }
}

/// A linear combination of operator words; each word applies right to left.
pub type OpSum = Vec<(CycScalar, Vec<Op>)>;

fn commutator(a: Op, b: Op, c: CycScalar, anti: bool) -> OpSum {
    let sign = if anti { c.clone() } else { -c.clone() };
    vec![(c, vec![a.clone(), b.clone()]), (sign, vec![b, a])]
}

fn fmt_sum(s: &OpSum) -> String {
    if s.is_empty() {
        return "0".into();
    }
    s.iter()
        .map(|(c, w)| {
            let w: Vec<String> = w.iter().map(|o| o.to_string()).collect();
            format!("({c}) {}", if w.is_empty() { "1".into() } else { w.join(" ") })
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

/// Evaluates operator words on sparse vectors whose basis elements are
/// interned as integers. Single-operator columns are cached, so repeated
/// words only pay for the linear combinations.
#[derive(Default)]
struct WordEngine {
    ids: HashMap<(usize, FockMonomial), u32>,
    keys: Vec<(usize, FockMonomial)>,
    ops: HashMap<Op, usize>,
    /// `columns[op][key]`: image of one basis element under one operator.
    columns: Vec<Vec<Option<Arc<[(u32, CycScalar)]>>>>,
    acc: Vec<CycScalar>,
    touched: Vec<u32>,
}

type Sparse = Vec<(u32, CycScalar)>;

/// Relation families certified by the affine check, in report order.
const AFFINE_FAMILIES: usize = 6;

/// `(family, label, lhs, rhs)`.
type Identity = (usize, String, OpSum, OpSum);

impl WordEngine {
    fn intern(&mut self, key: &(usize, FockMonomial)) -> u32 {
        if let Some(&id) = self.ids.get(key) {
            return id;
        }
        let id = self.keys.len() as u32;
        self.keys.push(key.clone());
        self.ids.insert(key.clone(), id);
        id
    }

    fn sparse(&mut self, v: &TwistedVector) -> Sparse {
        v.terms.iter().map(|(k, c)| (self.intern(k), c.clone())).collect()
    }

    fn op_id(&mut self, op: &Op) -> usize {
        if let Some(&k) = self.ops.get(op) {
            return k;
        }
        self.columns.push(Vec::new());
        self.ops.insert(op.clone(), self.columns.len() - 1);
        self.columns.len() - 1
    }

    fn column(&mut self, space: &TwistedSpace, op: &Op, k: usize, id: u32) -> Result<Arc<[(u32, CycScalar)]>, FockError> {
        if let Some(Some(c)) = self.columns[k].get(id as usize) {
            return Ok(c.clone());
        }
        let (t, m) = self.keys[id as usize].clone();
        let col: Arc<[(u32, CycScalar)]> = match op {
            Op::X(n, g) => {
                let (ph, t2) = space.f2.coset_act_mask(reduce_mod2(g), t);
                let ph = ph.to_scalar();
                let x = space.x_fock(g, *n, &m);
                x.terms().iter().map(|(mm, c)| (self.intern(&(t2, mm.clone())), c * &ph)).collect()
            }
            Op::A(..) => {
                let image = space.apply(op, &TwistedVector::basis(t, m))?;
                self.sparse(&image).into()
            }
        };
        let row = &mut self.columns[k];
        if row.len() <= id as usize {
            row.resize(id as usize + 1, None);
        }
        row[id as usize] = Some(col.clone());
        Ok(col)
    }

    fn add(&mut self, id: u32, c: &CycScalar) {
        let i = id as usize;
        if i >= self.acc.len() {
            self.acc.resize(i + 1 + self.acc.len() / 2, CycScalar::zero());
        }
        if self.acc[i].is_zero() {
            self.touched.push(id);
            self.acc[i] = c.clone();
        } else {
            self.acc[i] = &self.acc[i] + c;
        }
    }

    /// Drains the accumulator, dropping cancelled entries.
    fn drain(&mut self) -> Sparse {
        let mut out = Vec::with_capacity(self.touched.len());
        for id in std::mem::take(&mut self.touched) {
            let c = std::mem::take(&mut self.acc[id as usize]);
            if !c.is_zero() {
                out.push((id, c));
            }
        }
        out
    }

    fn apply_op(&mut self, space: &TwistedSpace, op: &Op, v: &[(u32, CycScalar)]) -> Result<Sparse, FockError> {
        let k = self.op_id(op);
        for (id, c) in v {
            let col = self.column(space, op, k, *id)?;
            for (id2, c2) in col.iter() {
                self.add(*id2, &(c * c2));
            }
        }
        Ok(self.drain())
    }

    /// Image of `v` under word `w` of a compiled plan, memoized per vector.
    fn word_image(
        &mut self,
        space: &TwistedSpace,
        plan: &[(Op, Option<usize>)],
        memo: &mut [Option<Arc<Sparse>>],
        w: usize,
        v: &[(u32, CycScalar)],
    ) -> Result<Arc<Sparse>, FockError> {
        if let Some(img) = &memo[w] {
            return Ok(img.clone());
        }
        let (op, inner) = &plan[w];
        let img = match inner {
            Some(i) => {
                let x = self.word_image(space, plan, memo, *i, v)?;
                self.apply_op(space, op, &x)?
            }
            None => self.apply_op(space, op, v)?,
        };
        let img = Arc::new(img);
        memo[w] = Some(img.clone());
        Ok(img)
    }

    /// `lhs v − rhs v`.
    fn difference(&mut self, space: &TwistedSpace, lhs: &OpSum, rhs: &OpSum, v: &[(u32, CycScalar)]) -> Result<Sparse, FockError> {
        let mut images = Vec::new();
        for (sign, sum) in [(1, lhs), (-1, rhs)] {
            for (c, word) in sum {
                let mut w = v.to_vec();
                for op in word.iter().rev() {
                    if w.is_empty() {
                        break;
                    }
                    w = self.apply_op(space, op, &w)?;
                }
                images.push((c.scale_int(sign), w));
            }
        }
        for (c, w) in &images {
            for (id, x) in w {
                self.add(*id, &(x * c));
            }
        }
        Ok(self.drain())
    }
}

type DKey = (LatticeVec, FockMonomial);
type XKey = (LatticeVec, i64, FockMonomial);

pub struct TwistedSpace {
    pub gamma: GammaData,
    pub xi: VirtualChar,
    pub fock: FockSpace,
    pub f2: F2Data,
    gram: Vec<Vec<i64>>,
    q_cache: Mutex<HashMap<LatticeVec, Arc<Vec<FockVector>>>>,
    d_cache: Mutex<HashMap<DKey, Arc<Vec<FockVector>>>>,
    x_cache: Mutex<HashMap<XKey, Arc<FockVector>>>,
    words: Mutex<WordEngine>,
}

impl fmt::Debug for TwistedSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TwistedSpace").field("gamma", &self.gamma.name).field("xi", &self.xi).finish()
    }
}

impl TwistedSpace {
    pub fn new(gamma: GammaData, xi: VirtualChar) -> Result<Self, GammaError> {
        let gram = gamma.cartan_matrix(&xi)?;
        let fock = FockSpace::from_gram(gram.clone(), xi.clone());
        let f2 = F2Data::from_gram(&gram);
        Ok(TwistedSpace {
            gamma,
            xi,
            fock,
            f2,
            gram,
            q_cache: Mutex::new(HashMap::new()),
            d_cache: Mutex::new(HashMap::new()),
            x_cache: Mutex::new(HashMap::new()),
            words: Mutex::new(WordEngine::default()),
        })
    }

    pub fn standard(gamma: GammaData) -> Self {
        let k = gamma.num_classes();
        Self::new(gamma, VirtualChar::standard(k)).expect("standard form is integral")
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    pub fn unit(&self, i: usize) -> LatticeVec {
        let mut v = vec![0; self.rank()];
        v[i] = 1;
        v
    }

    pub fn pairing(&self, a: &[i64], b: &[i64]) -> i64 {
        let mut s = 0;
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                s += x * y * self.gram[i][j];
            }
        }
        s
    }

    pub fn epsilon(&self, a: &[i64], b: &[i64]) -> i8 {
        self.f2.epsilon(a, b)
    }

    fn char_vector(g: &[i64]) -> Vec<CycScalar> {
        g.iter().map(|&x| CycScalar::from_int(x)).collect()
    }

    /// `q_0(γ), …, q_max(γ)`.
    pub fn q_upto(&self, gamma: &[i64], max: usize) -> Arc<Vec<FockVector>> {
        if let Some(q) = self.q_cache.lock().expect("cache").get(gamma) {
            if q.len() > max {
                return q.clone();
            }
        }
        let q = Arc::new(self.fock.q_series(&Self::char_vector(gamma), max.max(8)).expect("rank checked"));
        self.q_cache.lock().expect("cache").insert(gamma.to_vec(), q.clone());
        q
    }

    /// `D_0 M, …, D_{deg M} M`.
    fn d_series(&self, gamma: &[i64], m: &FockMonomial) -> Arc<Vec<FockVector>> {
        let key = (gamma.to_vec(), m.clone());
        if let Some(d) = self.d_cache.lock().expect("cache").get(&key) {
            return d.clone();
        }
        let g = Self::char_vector(gamma);
        let deg = m.degree();
        let mut d = vec![FockVector::monomial(m.clone(), CycScalar::one())];
        for k in 1..=deg {
            let mut acc = FockVector::zero();
            for n in (1..=k).step_by(2) {
                let t = self.fock.annihilate(&d[k - n], n as i64, &g).expect("odd mode");
                acc.add_scaled(&t, &CycScalar::from_rational(rat(-2, k as i64)));
            }
            d.push(acc);
        }
        let d = Arc::new(d);
        self.d_cache.lock().expect("cache").insert(key, d.clone());
        d
    }

    /// `D_k(γ)` on a Fock vector.
    fn d_apply(&self, gamma: &[i64], k: usize, v: &FockVector) -> FockVector {
        let mut out = FockVector::zero();
        for (m, c) in v.terms() {
            if k <= m.degree() {
                out.add_scaled(&self.d_series(gamma, m)[k], c);
            }
        }
        out
    }

    /// Fock part of `X_m(γ)` on a monomial, without the lattice factor.
    fn x_fock(&self, gamma: &[i64], m: i64, mono: &FockMonomial) -> Arc<FockVector> {
        let key = (gamma.to_vec(), m, mono.clone());
        if let Some(x) = self.x_cache.lock().expect("cache").get(&key) {
            return x.clone();
        }
        let deg = mono.degree() as i64;
        let mut out = FockVector::zero();
        if deg - m >= 0 {
            let d = self.d_series(gamma, mono);
            let q = self.q_upto(gamma, (deg - m) as usize);
            for k in m.max(0)..=deg {
                let dk = &d[k as usize];
                if dk.is_zero() {
                    continue;
                }
                out.add_product(&q[(k - m) as usize], dk);
            }
        }
        let out = Arc::new(out);
        self.x_cache.lock().expect("cache").insert(key, out.clone());
        out
    }

    /// `X_m(γ) v`.
    pub fn x_component(&self, m: i64, gamma: &[i64], v: &TwistedVector) -> TwistedVector {
        let mask = reduce_mod2(gamma);
        let mut out = TwistedVector::zero();
        for ((t, mono), c) in &v.terms {
            let (ph, t2) = self.f2.coset_act_mask(mask, *t);
            let x = self.x_fock(gamma, m, mono);
            out.add_fock_scaled(t2, &x, &(c * &ph.to_scalar()));
        }
        out
    }

    /// `a_m(γ) v` for odd `m`.
    pub fn heisenberg(&self, m: i64, gamma: &[i64], v: &TwistedVector) -> Result<TwistedVector, FockError> {
        let g = Self::char_vector(gamma);
        let mut out = TwistedVector::zero();
        for t in v.cosets() {
            let f = self.fock.mode(&v.fock_part(t), m, &g)?;
            out.add_fock_scaled(t, &f, &CycScalar::one());
        }
        Ok(out)
    }

    pub fn apply(&self, op: &Op, v: &TwistedVector) -> Result<TwistedVector, FockError> {
        match op {
            Op::X(m, g) => Ok(self.x_component(*m, g, v)),
            Op::A(m, g) => self.heisenberg(*m, g, v),
        }
    }

    pub fn apply_sum(&self, s: &OpSum, v: &TwistedVector) -> Result<TwistedVector, FockError> {
        let mut out = TwistedVector::zero();
        for (c, word) in s {
            let mut w = v.clone();
            for op in word.iter().rev() {
                if w.is_zero() {
                    break;
                }
                w = self.apply(op, &w)?;
            }
            out.add_scaled(&w, c);
        }
        Ok(out)
    }

    /// Normal-ordered component `N_{a,b}` of `:X(α,z)X(β,w):` on `v`.
    pub fn normal_ordered(&self, a: i64, alpha: &[i64], b: i64, beta: &[i64], v: &TwistedVector) -> TwistedVector {
        let sum: LatticeVec = alpha.iter().zip(beta).map(|(x, y)| x + y).collect();
        let mask = reduce_mod2(&sum);
        let mut out = TwistedVector::zero();
        for ((t, mono), c) in &v.terms {
            let (ph, t2) = self.f2.coset_act_mask(mask, *t);
            let c = c * &ph.to_scalar();
            let deg = mono.degree() as i64;
            let db = self.d_series(beta, mono);
            for l in b.max(0)..=deg {
                let dl = &db[l as usize];
                if dl.is_zero() {
                    continue;
                }
                for k in a.max(0)..=(deg - l) {
                    let dkl = self.d_apply(alpha, k as usize, dl);
                    if dkl.is_zero() {
                        continue;
                    }
                    let qa = self.q_upto(alpha, (k - a) as usize);
                    let qb = self.q_upto(beta, (l - b) as usize);
                    let f = qa[(k - a) as usize].mul(&qb[(l - b) as usize]).mul(&dkl);
                    out.add_fock_scaled(t2, &f, &c);
                }
            }
        }
        out
    }

    /// Unit vectors `M ⊗ e^{[t]}` with `deg M ≤ max_degree`.
    pub fn basis(&self, max_degree: usize) -> Vec<TwistedVector> {
        let mut out = Vec::new();
        for d in 0..=max_degree {
            for m in monomials_of_degree(d, self.rank()) {
                for t in 0..self.f2.num_cosets() {
                    out.push(TwistedVector::basis(t, m.clone()));
                }
            }
        }
        out
    }

    /// Checks `lhs v = rhs v` for every `v` in `vectors`; returns the number checked.
    pub fn check_identity(&self, lhs: &OpSum, rhs: &OpSum, vectors: &[TwistedVector]) -> Result<u64, String> {
        let mut eng = self.words.lock().expect("word engine");
        for v in vectors {
            let sv = eng.sparse(v);
            let diff = eng.difference(self, lhs, rhs, &sv).map_err(|e| e.to_string())?;
            if !diff.is_empty() {
                drop(eng);
                let l = self.apply_sum(lhs, v).map_err(|e| e.to_string())?;
                let r = self.apply_sum(rhs, v).map_err(|e| e.to_string())?;
                return Err(format!("{} ≠ {} on {}: {} vs {}", fmt_sum(lhs), fmt_sum(rhs), v, l, r));
            }
        }
        Ok(vectors.len() as u64)
    }

    /// `X_m(−γ) = (−1)^m X_m(γ)`.
    pub fn x_parity_check(&self, gamma: &[i64], window: i64, degree: usize) -> Result<u64, String> {
        let neg: LatticeVec = gamma.iter().map(|x| -x).collect();
        let basis = self.basis(degree);
        let mut count = 0;
        for m in -window..=window {
            let sign = if m.rem_euclid(2) == 0 { 1 } else { -1 };
            let lhs = vec![(CycScalar::one(), vec![Op::X(m, neg.clone())])];
            let rhs = vec![(CycScalar::from_int(sign), vec![Op::X(m, gamma.to_vec())])];
            count += self.check_identity(&lhs, &rhs, &basis)?;
        }
        Ok(count)
    }

    /// `[a_n(α), X_m(β)] = ⟨α,β⟩ X_{m+n}(β)` for odd `n`, `|n|, |m| ≤ window`.
    pub fn prim_commutator_check(&self, alpha: &[i64], beta: &[i64], window: i64, degree: usize) -> Result<u64, String> {
        let basis = self.basis(degree);
        let p = self.pairing(alpha, beta);
        let mut count = 0;
        for n in (-window..=window).filter(|n| n.rem_euclid(2) == 1) {
            for m in -window..=window {
                let lhs = commutator(Op::A(n, alpha.to_vec()), Op::X(m, beta.to_vec()), CycScalar::one(), false);
                let rhs = vec![(CycScalar::from_int(p), vec![Op::X(m + n, beta.to_vec())])];
                count += self
                    .check_identity(&lhs, &rhs, &basis)
                    .map_err(|e| format!("n={n} m={m}: {e}"))?;
            }
        }
        Ok(count)
    }

    /// `X(α,z)X(β,w) = ε(α,β) :X(α,z)X(β,w): ((z−w)/(z+w))^{⟨α,β⟩}` coefficientwise
    /// for component indices in `[−window, window]`.
    pub fn ope_check(&self, alpha: &[i64], beta: &[i64], window: i64, degree: usize) -> Result<u64, String> {
        let basis = self.basis(degree);
        let p = self.pairing(alpha, beta);
        let eps = CycScalar::from_int(self.epsilon(alpha, beta) as i64);
        let max_t = (degree as i64 + 2 * window + 1).max(0) as usize;
        let f = binomial_ratio_series(p, max_t + 1);
        let mut count = 0;
        for v in &basis {
            let d = v.terms.keys().map(|k| k.1.degree()).max().unwrap_or(0) as i64;
            for m in -window..=window {
                for m2 in -window..=window {
                    let lhs = self.x_component(m, alpha, &self.x_component(m2, beta, v));
                    let mut rhs = TwistedVector::zero();
                    let mut t = 0i64;
                    while m2 + t <= d && (t as usize) < f.len() {
                        let ft = &f[t as usize];
                        if !num_traits::Zero::is_zero(ft) {
                            let n = self.normal_ordered(m - t, alpha, m2 + t, beta, v);
                            rhs.add_scaled(&n, &(&eps * &CycScalar::from_rational(ft.clone())));
                        }
                        t += 1;
                    }
                    if lhs != rhs {
                        return Err(format!("m={m} m'={m2} on {v}: {lhs} vs {rhs}"));
                    }
                    count += 1;
                }
            }
        }
        Ok(count)
    }

    /// The three anticommutator families for `ξ = γ₀`.
    pub fn clifford_check(&self, window: i64, degree: usize) -> Vec<CheckReport> {
        let basis = self.basis(degree);
        let r = self.rank();
        let families: [(&str, i64, i64); 3] = [("{X(g_i),X(g_j)}", 1, 1), ("{X(-g_i),X(-g_j)}", -1, -1), ("{X(g_i),X(-g_j)}", 1, -1)];
        let mut reports = Vec::new();
        for (name, si, sj) in families {
            let mut res: Result<u64, String> = Ok(0);
            'outer: for i in 0..r {
                for j in 0..r {
                    let gi: LatticeVec = self.unit(i).iter().map(|x| x * si).collect();
                    let gj: LatticeVec = self.unit(j).iter().map(|x| x * sj).collect();
                    for n in -window..=window {
                        for n2 in -window..=window {
                            let lhs = commutator(Op::X(n, gi.clone()), Op::X(n2, gj.clone()), CycScalar::one(), true);
                            let val = if i == j && n == -n2 {
                                if si == sj {
                                    2 * if n.rem_euclid(2) == 0 { 1 } else { -1 }
                                } else {
                                    2
                                }
                            } else {
                                0
                            };
                            let rhs = if val == 0 { vec![] } else { vec![(CycScalar::from_int(val), vec![])] };
                            match self.check_identity(&lhs, &rhs, &basis) {
                                Ok(c) => {
                                    if let Ok(acc) = res.as_mut() {
                                        *acc += c;
                                    }
                                }
                                Err(e) => {
                                    res = Err(format!("i={i} j={j} n={n} n'={n2}: {e}"));
                                    break 'outer;
                                }
                            }
                        }
                    }
                }
            }
            reports.push(CheckReport::from_result(
                name,
                json!({"gamma": self.gamma.name, "window": window, "degree": degree}),
                res,
            ));
        }
        reports
    }

    /// Relations of the twisted toroidal (indices `0..=r`) or affine (`1..=r`)
    /// algebra under `x_n(±α_i) ↦ X_n(±γ_i)`, `h_i(m) ↦ a_m(γ_i)`, `C ↦ 1`.
    ///
    /// `xx` holds the constants `(κ_h, κ_C)` in
    /// `[x_n(α_i), x_{n′}(−α_i)] = κ_h h_i(n+n′) + κ_C n δ_{n,−n′} C`.
    pub fn affine_relation_check(&self, indices: &[usize], window: i64, degree: usize, xx: (i64, i64)) -> Vec<CheckReport> {
        self.affine_relation_checks(&[indices.to_vec()], window, degree, xx).concat()
    }

    /// `affine_relation_check` for several index sets at once; operator words
    /// shared between the sets are evaluated once per basis vector.
    pub fn affine_relation_checks(&self, index_sets: &[Vec<usize>], window: i64, degree: usize, xx: (i64, i64)) -> Vec<Vec<CheckReport>> {
        let mut ids = Vec::new();
        for (k, indices) in index_sets.iter().enumerate() {
            for (family, label, lhs, rhs) in self.affine_identities(indices, window, xx) {
                ids.push((AFFINE_FAMILIES * k + family, label, lhs, rhs));
            }
        }
        let mut results = self.check_batch(&ids, AFFINE_FAMILIES * index_sets.len(), degree).into_iter();
        index_sets
            .iter()
            .map(|indices| {
                let params = json!({
                    "gamma": self.gamma.name,
                    "indices": indices,
                    "window": window,
                    "degree": degree,
                });
                let r: Vec<_> = results.by_ref().take(AFFINE_FAMILIES).collect();
                self.affine_reports(indices, params, xx, r)
            })
            .collect()
    }

    fn affine_identities(&self, indices: &[usize], window: i64, xx: (i64, i64)) -> Vec<Identity> {
        let odd: Vec<i64> = (-window..=window).filter(|n| n.rem_euclid(2) == 1).collect();
        let all: Vec<i64> = (-window..=window).collect();
        let a = |i: usize, j: usize| self.gram[i][j];
        let pos = |i: usize| self.unit(i);
        let neg = |i: usize| self.unit(i).iter().map(|x| -x).collect::<LatticeVec>();
        let eps_ii = |i: usize| CycScalar::from_int(self.epsilon(&pos(i), &pos(i)) as i64);
        let one = CycScalar::one;
        let mut ids: Vec<Identity> = Vec::new();

        // [h_i(m), h_j(m')] = (m/2) a_ij δ_{m,−m'} C
        for &i in indices {
            for &j in indices {
                for &m in &odd {
                    for &m2 in &odd {
                        let lhs = commutator(Op::A(m, pos(i)), Op::A(m2, pos(j)), one(), false);
                        let c = if m == -m2 { rat(m * a(i, j), 2) } else { rint(0) };
                        ids.push((0, format!("i={i} j={j} m={m} m'={m2}"), lhs, scalar_sum(c)));
                    }
                }
            }
        }

        // [h_i(m), x_n(±α_j)] = ±a_ij x_{n+m}(±α_j)
        for &i in indices {
            for &j in indices {
                for &m in &odd {
                    for &n in &all {
                        for sign in [1i64, -1] {
                            let gj = if sign == 1 { pos(j) } else { neg(j) };
                            let lhs = commutator(Op::A(m, pos(i)), Op::X(n, gj.clone()), one(), false);
                            let rhs = vec![(CycScalar::from_int(sign * a(i, j)), vec![Op::X(n + m, gj)])];
                            ids.push((1, format!("i={i} j={j} m={m} n={n} sign={sign}"), lhs, rhs));
                        }
                    }
                }
            }
        }

        // [x_n(α_i), x_{n'}(−α_i)] = κ_h h_i(n+n') + κ_C n δ_{n,−n'} C
        for &i in indices {
            for &n in &all {
                for &n2 in &all {
                    let lhs = commutator(Op::X(n, pos(i)), Op::X(n2, neg(i)), eps_ii(i), false);
                    let mut rhs: OpSum = Vec::new();
                    if (n + n2).rem_euclid(2) == 1 {
                        rhs.push((CycScalar::from_int(xx.0), vec![Op::A(n + n2, pos(i))]));
                    }
                    if n == -n2 && n != 0 {
                        rhs.push((CycScalar::from_int(xx.1 * n), vec![]));
                    }
                    ids.push((2, format!("i={i} n={n} n'={n2}"), lhs, rhs));
                }
            }
        }

        // x_n(α_i) = (−1)^n x_n(−α_i)
        for &i in indices {
            for &n in &all {
                let sign = if n.rem_euclid(2) == 0 { one() } else { CycScalar::from_int(-1) };
                let lhs = vec![(one(), vec![Op::X(n, pos(i))])];
                let rhs = vec![(&sign * &eps_ii(i), vec![Op::X(n, neg(i))])];
                ids.push((3, format!("i={i} n={n}"), lhs, rhs));
            }
        }

        // Serre families
        for (family, nonneg) in [(4, true), (5, false)] {
            for &i in indices {
                for &j in indices {
                    let aij = a(i, j);
                    if (aij >= 0) != nonneg {
                        continue;
                    }
                    let e = aij.unsigned_abs() as i64;
                    for &n in &all {
                        for &n2 in &all {
                            let mut lhs: OpSum = Vec::new();
                            for s in 0..=e {
                                let mut c = binomial(e, s);
                                if !nonneg && s % 2 == 1 {
                                    c = -c;
                                }
                                lhs.extend(commutator(
                                    Op::X(n + s, pos(i)),
                                    Op::X(n2 - aij - s, pos(j)),
                                    CycScalar::from_int(c),
                                    false,
                                ));
                            }
                            ids.push((family, format!("i={i} j={j} n={n} n'={n2}"), lhs, vec![]));
                        }
                    }
                }
            }
        }

        ids
    }

    fn affine_reports(&self, indices: &[usize], params: serde_json::Value, xx: (i64, i64), results: Vec<Result<u64, String>>) -> Vec<CheckReport> {
        let pos = |i: usize| self.unit(i);
        let mut res = results.into_iter();
        let mut next = || res.next().expect("one result per family");
        let mut reports = Vec::new();
        reports.push(CheckReport::from_result("[h_i(m),h_j(m')] = (m/2)a_ij delta C", params.clone(), next()));
        reports.push(CheckReport::from_result("[h_i(m),x_n(a_j)] = a_ij x_{n+m}(a_j)", params.clone(), next()));
        let name = if xx.0 == xx.1 {
            format!("[x_n(a_i),x_n'(-a_i)] = {}(h_i(n+n') + n delta C)", xx.0)
        } else {
            format!("[x_n(a_i),x_n'(-a_i)] = {} h_i(n+n') + {} n delta C", xx.0, xx.1)
        };
        reports.push(CheckReport::from_result(name, params.clone(), next()));

        // h_i(even) = 0: only odd Heisenberg modes exist
        let even_rejected = self.heisenberg(2, &pos(indices.first().copied().unwrap_or(0)), &TwistedVector::vacuum(0)).is_err();
        reports.push(if even_rejected {
            CheckReport::pass("h_i(2n) = 0", params.clone(), 1)
        } else {
            CheckReport::fail("h_i(2n) = 0", params.clone(), "even mode accepted", 0)
        });

        reports.push(CheckReport::from_result("x_n(a_i) = (-1)^n x_n(-a_i)", params.clone(), next()));
        reports.push(CheckReport::from_result("Serre, a_ij >= 0", params.clone(), next()));
        reports.push(CheckReport::from_result("Serre, a_ij < 0", params, next()));
        reports
    }

    /// Checks every identity on every unit vector `M ⊗ e^{[t]}` with
    /// `deg M ≤ degree`. Returns one result per family; a family keeps its
    /// first failure.
    ///
    /// Each operator is a Fock operator tensored with a phased coset move, so a
    /// word's image on coset `t` is its image on coset 0 rescaled by the ratio
    /// of path phases and moved to the word's target coset. Word images are
    /// computed once per monomial and memoized across identities.
    fn check_batch(&self, ids: &[Identity], families: usize, degree: usize) -> Vec<Result<u64, String>> {
        let mut words: HashMap<Vec<Op>, usize> = HashMap::new();
        let mut plan: Vec<(Op, Option<usize>)> = Vec::new();
        fn word_id(w: &[Op], words: &mut HashMap<Vec<Op>, usize>, plan: &mut Vec<(Op, Option<usize>)>) -> Option<usize> {
            let (first, rest) = w.split_first()?;
            if let Some(&k) = words.get(w) {
                return Some(k);
            }
            let inner = word_id(rest, words, plan);
            plan.push((first.clone(), inner));
            words.insert(w.to_vec(), plan.len() - 1);
            Some(plan.len() - 1)
        }
        let mut compiled: Vec<Vec<(CycScalar, Option<usize>)>> = Vec::with_capacity(ids.len());
        for (_, _, lhs, rhs) in ids {
            let terms = lhs.iter().map(|(c, w)| (c.clone(), w)).chain(rhs.iter().map(|(c, w)| (-c, w)));
            compiled.push(terms.map(|(c, w)| (c, word_id(w, &mut words, &mut plan))).collect());
        }

        // path[w][t]: phase and target coset of word w started on coset t
        let cosets = self.f2.num_cosets();
        let mut path: Vec<Vec<(Phase, usize)>> = Vec::with_capacity(plan.len());
        for (op, inner) in &plan {
            let row = (0..cosets)
                .map(|t| {
                    let (p, t) = inner.map_or((Phase::ONE, t), |i| path[i][t]);
                    match op {
                        Op::X(_, g) => {
                            let (q, t2) = self.f2.coset_act_mask(reduce_mod2(g), t);
                            (p.mul(q), t2)
                        }
                        Op::A(..) => (p, t),
                    }
                })
                .collect();
            path.push(row);
        }

        let mut results: Vec<Result<u64, String>> = vec![Ok(0); families];
        let mut eng = self.words.lock().expect("word engine");
        let mut moved: HashMap<(u32, usize), u32> = HashMap::new();
        for d in 0..=degree {
            for mono in monomials_of_degree(d, self.rank()) {
                let v0 = eng.sparse(&TwistedVector::basis(0, mono.clone()));
                let mut memo: Vec<Option<Arc<Sparse>>> = vec![None; plan.len()];
                for (k, (family, label, lhs, rhs)) in ids.iter().enumerate() {
                    for t in 0..cosets {
                        if results[*family].is_err() {
                            break;
                        }
                        // Images first: applying an operator drains the accumulator.
                        let mut failed = None;
                        let mut images = Vec::with_capacity(compiled[k].len());
                        for (_, w) in &compiled[k] {
                            match w.map(|w| eng.word_image(self, &plan, &mut memo, w, &v0)).transpose() {
                                Ok(img) => images.push(img),
                                Err(e) => {
                                    failed = Some(e.to_string());
                                    break;
                                }
                            }
                        }
                        if failed.is_some() {
                            images.clear();
                        }
                        for ((c, w), img) in compiled[k].iter().zip(&images) {
                            let (Some(w), Some(img)) = (w, img) else {
                                let id = eng.intern(&(t, mono.clone()));
                                eng.add(id, c);
                                continue;
                            };
                            let (p0, t0) = path[*w][0];
                            let (p, tt) = path[*w][t];
                            let factor = c * &p.mul(p0.inv()).to_scalar();
                            for (id, x) in img.iter() {
                                let id = if tt == t0 {
                                    *id
                                } else {
                                    match moved.get(&(*id, tt)) {
                                        Some(&m) => m,
                                        None => {
                                            let key = (tt, eng.keys[*id as usize].1.clone());
                                            let m = eng.intern(&key);
                                            moved.insert((*id, tt), m);
                                            m
                                        }
                                    }
                                };
                                eng.add(id, &(x * &factor));
                            }
                        }
                        let clean = eng.drain().is_empty();
                        if failed.is_none() && clean {
                            if let Ok(n) = results[*family].as_mut() {
                                *n += 1;
                            }
                            continue;
                        }
                        let v = TwistedVector::basis(t, mono.clone());
                        let msg = failed.unwrap_or_else(|| {
                            let l = self.apply_sum(lhs, &v).map(|x| x.to_string()).unwrap_or_else(|e| e.to_string());
                            let r = self.apply_sum(rhs, &v).map(|x| x.to_string()).unwrap_or_else(|e| e.to_string());
                            format!("{} ≠ {} on {}: {} vs {}", fmt_sum(lhs), fmt_sum(rhs), v, l, r)
                        });
                        results[*family] = Err(format!("{label}: {msg}"));
                    }
                }
            }
        }
        results
    }
}

fn scalar_sum(c: Rational) -> OpSum {
    if num_traits::Zero::is_zero(&c) {
        vec![]
    } else {
        vec![(CycScalar::from_rational(c), vec![])]
    }
}

pub fn binomial(n: i64, k: i64) -> i64 {
    if k < 0 || k > n {
        return 0;
    }
    (0..k).fold(1i64, |acc, i| acc * (n - i) / (i + 1))
}

/// Coefficients of `((1−u)/(1+u))^p` as a power series in `u`, up to `u^{len−1}`.
pub fn binomial_ratio_series(p: i64, len: usize) -> Vec<Rational> {
    let mut out = vec![rint(0); len];
    if len == 0 {
        return out;
    }
    out[0] = rint(1);
    let (num, den): (i64, i64) = if p >= 0 { (-1, 1) } else { (1, -1) };
    for _ in 0..p.unsigned_abs() {
        // multiply by (1 + num·u)
        for t in (1..len).rev() {
            let prev = out[t - 1].clone() * rint(num);
            out[t] += prev;
        }
        // divide by (1 + den·u): c_t ← c_t − den·c_{t−1}
        for t in 1..len {
            let prev = out[t - 1].clone() * rint(den);
            out[t] -= prev;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gamma::builtin;
    use crate::report::all_passed;

    fn space(name: &str, mckay: bool) -> TwistedSpace {
        let g = builtin(name).unwrap().data;
        if mckay {
            let xi = g.mckay_xi(None).unwrap();
            TwistedSpace::new(g, xi).unwrap()
        } else {
            TwistedSpace::standard(g)
        }
    }

    #[test]
    fn series() {
        assert_eq!(binomial_ratio_series(1, 4), vec![rint(1), rint(-2), rint(2), rint(-2)]);
        assert_eq!(binomial_ratio_series(-2, 4), vec![rint(1), rint(4), rint(8), rint(12)]);
        assert_eq!(binomial_ratio_series(0, 3), vec![rint(1), rint(0), rint(0)]);
    }

    #[test]
    fn components_on_vacuum() {
        let s = space("cyclic:2", false);
        let g1 = s.unit(1);
        for t in 0..s.f2.num_cosets() {
            let v = TwistedVector::vacuum(t);
            assert!(s.x_component(1, &g1, &v).is_zero());
            let (ph, t2) = s.f2.coset_act(&g1, t);
            assert_eq!(s.x_component(0, &g1, &v), TwistedVector::vacuum(t2).scale(&ph.to_scalar()));
            let expect = TwistedVector::basis(t2, FockMonomial::new(vec![(1, 1)])).scale(&(ph.to_scalar() * CycScalar::from_int(2)));
            assert_eq!(s.x_component(-1, &g1, &v), expect);
        }
    }

    #[test]
    fn degree_shift() {
        let s = space("cyclic:3", false);
        let v = TwistedVector::basis(0, FockMonomial::new(vec![(3, 0), (1, 2)]));
        for m in -3..=4 {
            let x = s.x_component(m, &[1, -1, 0], &v);
            if !x.is_zero() {
                assert_eq!(x.homogeneous_degree(), Some((4 - m) as usize));
            }
        }
    }

    #[test]
    fn parity_and_prim() {
        let s = space("cyclic:2", false);
        s.x_parity_check(&[1, 0], 3, 4).unwrap();
        s.x_parity_check(&[1, 1], 2, 3).unwrap();
        s.prim_commutator_check(&[1, 0], &[1, 0], 3, 3).unwrap();
        s.prim_commutator_check(&[0, 1], &[1, -1], 3, 3).unwrap();
        let t = space("trivial", false);
        t.prim_commutator_check(&[1], &[1], 3, 4).unwrap();
    }

    #[test]
    fn ope_small() {
        let t = space("trivial", false);
        t.ope_check(&[1], &[1], 2, 3).unwrap();
        let s = space("cyclic:2", true);
        s.ope_check(&[1, 0], &[0, 1], 2, 3).unwrap();
        s.ope_check(&[1, 0], &[1, 0], 2, 2).unwrap();
    }

    #[test]
    fn clifford_small() {
        let s = space("cyclic:2", false);
        let r = s.clifford_check(2, 3);
        assert!(all_passed(&r), "{r:?}");
        let t = space("trivial", false);
        assert!(all_passed(&t.clifford_check(2, 3)));
    }

    #[test]
    fn affine_small() {
        let s = space("cyclic:2", true);
        let passed = |xx| s.affine_relation_check(&[0, 1], 2, 3, xx).iter().map(|r| r.passed()).collect::<Vec<_>>();
        assert!(passed((8, 4)).iter().all(|&p| p));
        let literal = passed((8, 8));
        assert!(!literal[2]);
        assert_eq!(literal.iter().filter(|&&p| !p).count(), 1);
    }

    #[test]
    fn batch_agrees_with_direct_evaluation() {
        let s = space("cyclic:3", true);
        let degree = 3;
        let mut ids = s.affine_identities(&[0, 1, 2], 1, (8, 4));
        // Perturbed copies must fail exactly where the direct path fails.
        let wrong: Vec<Identity> = ids
            .iter()
            .filter(|id| !id.3.is_empty())
            .take(40)
            .map(|(_, l, lhs, rhs)| (1, l.clone(), lhs.clone(), rhs.iter().map(|(c, w)| (c.scale_int(2), w.clone())).collect()))
            .collect();
        for id in &mut ids {
            id.0 = 0;
        }
        let basis = s.basis(degree);
        for (k, id) in ids.iter().chain(&wrong).enumerate() {
            let batch = s.check_batch(std::slice::from_ref(id), 2, degree);
            let direct = s.check_identity(&id.2, &id.3, &basis);
            assert_eq!(batch[id.0].is_ok(), direct.is_ok(), "identity {k}: {} {:?}", id.1, batch[id.0]);
            if let (Ok(a), Ok(b)) = (&batch[id.0], &direct) {
                assert_eq!(a, b);
            }
        }
    }
}
