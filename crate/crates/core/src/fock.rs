//! The Fock space: polynomials in `a_{−n}(γ_i)` for odd `n ≥ 1`, with the
//! twisted Heisenberg action and the bilinear form determined by `ξ`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{FockError, GammaError};
use crate::gamma::{GammaData, VirtualChar};
use crate::partitions::MultiPartition;
use crate::scalars::{rat, rint, CycScalar, Rational};

/// A factor `a_{−n}(γ_i)` as `(n, i)`.
pub type Factor = (u32, usize);

/// Multiset of factors, sorted by decreasing mode then increasing index.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FockMonomial(Vec<Factor>);

fn factor_order(a: &Factor, b: &Factor) -> std::cmp::Ordering {
    b.0.cmp(&a.0).then(a.1.cmp(&b.1))
}

impl FockMonomial {
    pub fn one() -> Self {
        FockMonomial(Vec::new())
    }

    pub fn new(mut factors: Vec<Factor>) -> Self {
        factors.sort_by(factor_order);
        FockMonomial(factors)
    }

    pub fn factors(&self) -> &[Factor] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|f| f.0 as usize).sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn times(&self, f: Factor) -> Self {
        let mut v = self.0.clone();
        let pos = v.partition_point(|x| factor_order(x, &f) != std::cmp::Ordering::Greater);
        v.insert(pos, f);
        FockMonomial(v)
    }

    pub fn product(&self, other: &FockMonomial) -> Self {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Self::new(v)
    }

    /// Distinct factors with multiplicities.
    pub fn grouped(&self) -> Vec<(Factor, usize)> {
        let mut out: Vec<(Factor, usize)> = Vec::new();
        for &f in &self.0 {
            match out.last_mut() {
                Some((g, m)) if *g == f => *m += 1,
                _ => out.push((f, 1)),
            }
        }
        out
    }

    fn without_one(&self, f: Factor) -> Self {
        let mut v = self.0.clone();
        let pos = v.iter().position(|&x| x == f).expect("factor present");
        v.remove(pos);
        FockMonomial(v)
    }

    /// Sorted list of modes; two monomials pair nontrivially only if these agree.
    fn modes(&self) -> Vec<u32> {
        self.0.iter().map(|f| f.0).collect()
    }
}

impl fmt::Display for FockMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let s: Vec<String> = self.grouped().iter().map(|((n, i), m)| {
            if *m == 1 {
                format!("a-{n}(g{i})")
            } else {
                format!("a-{n}(g{i})^{m}")
            }
        }).collect();
        write!(f, "{}", s.join(" "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct FockVector {
    terms: BTreeMap<FockMonomial, CycScalar>,
}

impl FockVector {
    pub fn zero() -> Self {
        FockVector::default()
    }

    pub fn vacuum() -> Self {
        Self::monomial(FockMonomial::one(), CycScalar::one())
    }

    pub fn monomial(m: FockMonomial, c: CycScalar) -> Self {
        let mut v = Self::zero();
        v.add_term(m, c);
        v
    }

    pub fn terms(&self) -> &BTreeMap<FockMonomial, CycScalar> {
        &self.terms
    }

    pub fn into_terms(self) -> BTreeMap<FockMonomial, CycScalar> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &FockMonomial) -> CycScalar {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, m: FockMonomial, c: CycScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &FockVector, c: &CycScalar) {
        if c.is_zero() {
            return;
        }
        for (m, x) in &other.terms {
            self.add_term(m.clone(), x * c);
        }
    }

    pub fn add(&self, other: &FockVector) -> FockVector {
        let mut out = self.clone();
        out.add_scaled(other, &CycScalar::one());
        out
    }

    pub fn sub(&self, other: &FockVector) -> FockVector {
        let mut out = self.clone();
        out.add_scaled(other, &CycScalar::from_int(-1));
        out
    }

    pub fn scale(&self, c: &CycScalar) -> FockVector {
        let mut out = Self::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn mul(&self, other: &FockVector) -> FockVector {
        let mut out = Self::zero();
        out.add_product(self, other);
        out
    }

    /// `self += a·b` without building the product separately.
    pub fn add_product(&mut self, a: &FockVector, b: &FockVector) {
        for (ma, x) in &a.terms {
            for (mb, y) in &b.terms {
                self.add_term(ma.product(mb), x * y);
            }
        }
    }

    /// The degree when homogeneous.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(|m| m.degree());
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn component(&self, d: usize) -> FockVector {
        FockVector { terms: self.terms.iter().filter(|(m, _)| m.degree() == d).map(|(m, c)| (m.clone(), c.clone())).collect() }
    }

    /// `[{"mono": [[n, name], ...], "coeff": CycScalar}]`.
    pub fn to_doc(&self, names: &[String]) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(m, c)| {
                    let mono: Vec<Value> = m.0.iter().map(|(n, i)| json!([n, names[*i]])).collect();
                    json!({"mono": mono, "coeff": c})
                })
                .collect(),
        )
    }
}

impl fmt::Display for FockVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let s: Vec<String> = self.terms.iter().map(|(m, c)| format!("({c}) {m}")).collect();
        write!(f, "{}", s.join(" + "))
    }
}

/// Formal sum of `u ⊗ v` over pairs of monomials.
pub type FockTensor = BTreeMap<(FockMonomial, FockMonomial), CycScalar>;

fn check_mode(n: i64) -> Result<u32, FockError> {
    if n > 0 && n % 2 == 1 {
        Ok(n as u32)
    } else {
        Err(FockError::BadMode(n))
    }
}

/// Fock space for a fixed `(Γ, ξ)`: holds the Gram matrix `⟨γ_i, γ_j⟩_ξ`.
pub struct FockSpace {
    pub gram: Vec<Vec<i64>>,
    pub xi: VirtualChar,
    cache: Mutex<HashMap<(FockMonomial, FockMonomial), Rational>>,
}

impl fmt::Debug for FockSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FockSpace").field("gram", &self.gram).field("xi", &self.xi).finish()
    }
}

impl Clone for FockSpace {
    fn clone(&self) -> Self {
        FockSpace::from_gram(self.gram.clone(), self.xi.clone())
    }
}

impl FockSpace {
    pub fn new(g: &GammaData, xi: &VirtualChar) -> Result<Self, GammaError> {
        Ok(Self::from_gram(g.cartan_matrix(xi)?, xi.clone()))
    }

    pub fn standard(g: &GammaData) -> Self {
        Self::new(g, &VirtualChar::standard(g.num_classes())).expect("standard form is integral")
    }

    pub fn from_gram(gram: Vec<Vec<i64>>, xi: VirtualChar) -> Self {
        FockSpace { gram, xi, cache: Mutex::new(HashMap::new()) }
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    fn check_len(&self, gamma: &[CycScalar]) -> Result<(), FockError> {
        if gamma.len() != self.rank() {
            return Err(FockError::Length(gamma.len(), self.rank()));
        }
        Ok(())
    }

    /// `⟨γ, γ_j⟩_ξ` for a character vector γ.
    pub fn pairing_with_basis(&self, gamma: &[CycScalar], j: usize) -> CycScalar {
        let mut acc = CycScalar::zero();
        for (i, c) in gamma.iter().enumerate() {
            let gij = self.gram[i][j];
            if gij != 0 && !c.is_zero() {
                acc = acc + c.scale(&rint(gij));
            }
        }
        acc
    }

    /// `⟨α, β⟩_ξ` for two character vectors.
    pub fn pairing(&self, alpha: &[CycScalar], beta: &[CycScalar]) -> CycScalar {
        let mut acc = CycScalar::zero();
        for (j, b) in beta.iter().enumerate() {
            if !b.is_zero() {
                acc = acc + &self.pairing_with_basis(alpha, j) * b;
            }
        }
        acc
    }

    /// Multiplication by `a_{−n}(γ)`.
    pub fn create(&self, v: &FockVector, n: i64, gamma: &[CycScalar]) -> Result<FockVector, FockError> {
        let n = check_mode(n)?;
        self.check_len(gamma)?;
        let mut out = FockVector::zero();
        for (i, c) in gamma.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (m, x) in &v.terms {
                out.add_term(m.times((n, i)), x * c);
            }
        }
        Ok(out)
    }

    /// `a_n(γ)` acting as the derivation with `a_n(γ) a_{−n}(α) = (n/2)⟨γ, α⟩_ξ`.
    pub fn annihilate(&self, v: &FockVector, n: i64, gamma: &[CycScalar]) -> Result<FockVector, FockError> {
        let n = check_mode(n)?;
        self.check_len(gamma)?;
        let weights: Vec<CycScalar> =
            (0..self.rank()).map(|j| self.pairing_with_basis(gamma, j).scale(&rat(n as i64, 2))).collect();
        let mut out = FockVector::zero();
        for (m, x) in &v.terms {
            for ((k, j), mult) in m.grouped() {
                if k != n || weights[j].is_zero() {
                    continue;
                }
                let c = (x * &weights[j]).scale(&rint(mult as i64));
                out.add_term(m.without_one((k, j)), c);
            }
        }
        Ok(out)
    }

    /// `a_m(γ)` for odd `m` of either sign.
    pub fn mode(&self, v: &FockVector, m: i64, gamma: &[CycScalar]) -> Result<FockVector, FockError> {
        if m < 0 {
            self.create(v, -m, gamma)
        } else {
            self.annihilate(v, m, gamma)
        }
    }

    fn monomial_inner(&self, a: &FockMonomial, b: &FockMonomial) -> Rational {
        if a.len() != b.len() || a.modes() != b.modes() {
            return Rational::zero();
        }
        if a.is_empty() {
            return Rational::one();
        }
        let key = (a.clone(), b.clone());
        if let Some(v) = self.cache.lock().expect("cache").get(&key) {
            return v.clone();
        }
        // ⟨a_{−n}(γ_α) A', B⟩ = ⟨A', a_n(γ_α) B⟩
        let (n, alpha) = a.0[0];
        let rest = FockMonomial(a.0[1..].to_vec());
        let mut acc = Rational::zero();
        for ((k, beta), mult) in b.grouped() {
            if k != n || self.gram[alpha][beta] == 0 {
                continue;
            }
            let w = rat(n as i64 * self.gram[alpha][beta] * mult as i64, 2);
            let sub = self.monomial_inner(&rest, &b.without_one((k, beta)));
            acc += w * sub;
        }
        self.cache.lock().expect("cache").insert(key, acc.clone());
        acc
    }

    /// Bilinear form with `⟨1, 1⟩ = 1` and `a_n(γ)` adjoint to `a_{−n}(γ)`.
    pub fn inner(&self, u: &FockVector, v: &FockVector) -> CycScalar {
        let mut acc = CycScalar::zero();
        for (a, x) in &u.terms {
            for (b, y) in &v.terms {
                let w = self.monomial_inner(a, b);
                if !w.is_zero() {
                    acc = acc + (x * y).scale(&w);
                }
            }
        }
        acc
    }

    /// `⟨f ⊗ g, T⟩ = Σ T_{ab} ⟨f, a⟩ ⟨g, b⟩`.
    pub fn tensor_inner(&self, f: &FockVector, g: &FockVector, t: &FockTensor) -> CycScalar {
        let mut acc = CycScalar::zero();
        for ((a, b), c) in t {
            let fa = self.inner(f, &FockVector::monomial(a.clone(), CycScalar::one()));
            if fa.is_zero() {
                continue;
            }
            let gb = self.inner(g, &FockVector::monomial(b.clone(), CycScalar::one()));
            acc = acc + &(&fa * &gb) * c;
        }
        acc
    }

    /// `exp(Σ (2/n) a_{−n}(γ) zⁿ)` coefficients `q_0, …, q_max`.
    pub fn q_series(&self, gamma: &[CycScalar], max: usize) -> Result<Vec<FockVector>, FockError> {
        self.check_len(gamma)?;
        let mut q = vec![FockVector::vacuum()];
        for n in 1..=max {
            let mut acc = FockVector::zero();
            for k in (1..=n).step_by(2) {
                let term = self.create(&q[n - k], k as i64, gamma)?;
                acc.add_scaled(&term, &CycScalar::from_rational(rat(2, n as i64)));
            }
            q.push(acc);
        }
        Ok(q)
    }

    pub fn q_gen(&self, n: usize, gamma: &[CycScalar]) -> Result<FockVector, FockError> {
        Ok(self.q_series(gamma, n)?.pop().expect("nonempty"))
    }
}

/// Character vector of `a_m(c) = Σ_γ γ(c⁻¹) a_m(γ)`.
pub fn class_generator(g: &GammaData, c: usize) -> Vec<CycScalar> {
    let ci = g.inverse(c);
    (0..g.num_classes()).map(|i| g.chars[i][ci].clone()).collect()
}

/// `a′_{−ρ} = ∏_c ∏_{parts p} a_{−p}(c)`.
pub fn a_prime_vector(space: &FockSpace, g: &GammaData, rho: &MultiPartition) -> Result<FockVector, FockError> {
    if !rho.all_odd() {
        return Err(FockError::EvenPart);
    }
    let mut v = FockVector::vacuum();
    for (c, p) in rho.0.iter().enumerate() {
        let gen = class_generator(g, c);
        for &part in p.parts() {
            v = space.create(&v, part as i64, &gen)?;
        }
    }
    Ok(v)
}

fn binomial(n: usize, k: usize) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Coproduct with every generator primitive.
pub fn coproduct(v: &FockVector) -> FockTensor {
    let mut out = FockTensor::new();
    for (m, c) in &v.terms {
        let groups = m.grouped();
        let mut splits: Vec<(Vec<Factor>, Vec<Factor>, BigInt)> = vec![(Vec::new(), Vec::new(), BigInt::one())];
        for (f, mult) in groups {
            let mut next = Vec::new();
            for (l, r, w) in &splits {
                for j in 0..=mult {
                    let mut l2 = l.clone();
                    let mut r2 = r.clone();
                    l2.extend(std::iter::repeat(f).take(j));
                    r2.extend(std::iter::repeat(f).take(mult - j));
                    next.push((l2, r2, w * binomial(mult, j)));
                }
            }
            splits = next;
        }
        for (l, r, w) in splits {
            let key = (FockMonomial::new(l), FockMonomial::new(r));
            let val = c.scale(&Rational::from_integer(w));
            let s = out.get(&key).map(|x| x + &val).unwrap_or(val);
            if s.is_zero() {
                out.remove(&key);
            } else {
                out.insert(key, s);
            }
        }
    }
    out
}

/// All monomials of degree exactly `d` over `k` indices.
pub fn monomials_of_degree(d: usize, k: usize) -> Vec<FockMonomial> {
    let colored: Vec<MultiPartition> = crate::partitions::enumerate(crate::partitions::PartitionKind::Odd, d, k);
    colored
        .into_iter()
        .map(|mp| {
            let mut f = Vec::new();
            for (i, p) in mp.0.iter().enumerate() {
                for &part in p.parts() {
                    f.push((part, i));
                }
            }
            FockMonomial::new(f)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gamma::builtin;
    use crate::partitions::Partition;

    fn std_space(name: &str) -> (GammaData, FockSpace) {
        let g = builtin(name).unwrap().data;
        let s = FockSpace::standard(&g);
        (g, s)
    }

    fn a(factors: &[(u32, usize)]) -> FockVector {
        FockVector::monomial(FockMonomial::new(factors.to_vec()), CycScalar::one())
    }

    #[test]
    fn creation_and_annihilation() {
        let (g, s) = std_space("trivial");
        let e0 = g.basis(0);
        let v = s.create(&FockVector::vacuum(), 1, &e0).unwrap();
        assert_eq!(v, a(&[(1, 0)]));
        let half = s.annihilate(&v, 1, &e0).unwrap();
        assert_eq!(half, FockVector::vacuum().scale(&CycScalar::from_rational(rat(1, 2))));
        let two = a(&[(1, 0), (1, 0)]);
        assert_eq!(s.annihilate(&two, 1, &e0).unwrap(), v);
        assert!(s.annihilate(&v, 3, &e0).unwrap().is_zero());
        assert!(s.create(&v, 2, &e0).is_err());
        let x = s.create(&s.create(&FockVector::vacuum(), 1, &e0).unwrap(), 3, &e0).unwrap();
        let y = s.create(&s.create(&FockVector::vacuum(), 3, &e0).unwrap(), 1, &e0).unwrap();
        assert_eq!(x, y);
    }

    #[test]
    fn class_generators() {
        let (g, s) = std_space("cyclic:2");
        let v = a_prime_vector(&s, &g, &MultiPartition(vec![Partition::empty(), Partition(vec![1])])).unwrap();
        assert_eq!(v, a(&[(1, 0)]).sub(&a(&[(1, 1)])));
        // [a_1(c0), a_{-1}(c0)] on vacuum equals ζ_{c0}/2 = 1
        let gen = class_generator(&g, 0);
        let up = s.create(&FockVector::vacuum(), 1, &gen).unwrap();
        let back = s.annihilate(&up, 1, &class_generator(&g, g.inverse(0))).unwrap();
        assert_eq!(back, FockVector::vacuum());
    }

    #[test]
    fn inner_products() {
        let (g, s) = std_space("trivial");
        let cube = a(&[(1, 0), (1, 0), (1, 0)]);
        assert_eq!(s.inner(&cube, &cube), CycScalar::from_rational(rat(3, 4)));
        let one = a(&[(1, 0)]);
        assert_eq!(s.inner(&one, &one), CycScalar::from_rational(rat(1, 2)));
        assert!(s.inner(&FockVector::vacuum(), &one).is_zero());
        let _ = g;
    }

    #[test]
    fn q_generators() {
        let (g, s) = std_space("trivial");
        let q = s.q_series(&g.basis(0), 3).unwrap();
        assert_eq!(q[1], a(&[(1, 0)]).scale(&CycScalar::from_int(2)));
        assert_eq!(q[2], a(&[(1, 0), (1, 0)]).scale(&CycScalar::from_int(2)));
        let expect = a(&[(1, 0), (1, 0), (1, 0)])
            .scale(&CycScalar::from_rational(rat(4, 3)))
            .add(&a(&[(3, 0)]).scale(&CycScalar::from_rational(rat(2, 3))));
        assert_eq!(q[3], expect);
    }

    #[test]
    fn coproduct_examples() {
        let x = a(&[(1, 0)]);
        let t = coproduct(&x);
        assert_eq!(t.len(), 2);
        let sq = a(&[(1, 0), (1, 0)]);
        let t = coproduct(&sq);
        let mid = t.get(&(FockMonomial::new(vec![(1, 0)]), FockMonomial::new(vec![(1, 0)]))).unwrap();
        assert_eq!(*mid, CycScalar::from_int(2));
        // counit
        let mut back = FockVector::zero();
        for ((l, r), c) in &t {
            if r.is_empty() {
                back.add_term(l.clone(), c.clone());
            }
        }
        assert_eq!(back, sq);
    }

    #[test]
    fn monomial_counts() {
        assert_eq!(monomials_of_degree(3, 1).len(), 2);
        assert_eq!(monomials_of_degree(2, 3).len(), 6);
    }
}
