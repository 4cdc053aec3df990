//! Spin super class functions, stored by their values on the classes `D_ρ⁺`
//! for `ρ ∈ OP_n(Γ_*)`, and the characteristic map into the Fock space.

use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::error::FockError;
use crate::fock::{a_prime_vector, class_generator, coproduct, FockMonomial, FockSpace, FockVector};
use crate::gamma::{GammaData, VirtualChar};
use crate::partitions::{enumerate, MultiPartition, Partition, PartitionKind};
use crate::scalars::{CycScalar, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpinClassFun {
    pub n: usize,
    values: BTreeMap<MultiPartition, CycScalar>,
}

impl SpinClassFun {
    pub fn zero(n: usize) -> Self {
        SpinClassFun { n, values: BTreeMap::new() }
    }

    /// The degree-0 unit.
    pub fn unit(k: usize) -> Self {
        let mut f = Self::zero(0);
        f.set(MultiPartition::empty(k), CycScalar::one());
        f
    }

    pub fn get(&self, rho: &MultiPartition) -> CycScalar {
        self.values.get(rho).cloned().unwrap_or_default()
    }

    pub fn set(&mut self, rho: MultiPartition, v: CycScalar) {
        if v.is_zero() {
            self.values.remove(&rho);
        } else {
            self.values.insert(rho, v);
        }
    }

    fn add_at(&mut self, rho: MultiPartition, v: CycScalar) {
        let s = self.get(&rho) + v;
        self.set(rho, s);
    }

    pub fn support(&self) -> impl Iterator<Item = (&MultiPartition, &CycScalar)> {
        self.values.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn scale(&self, c: &CycScalar) -> Self {
        let mut out = Self::zero(self.n);
        for (r, v) in &self.values {
            out.set(r.clone(), v * c);
        }
        out
    }

    pub fn add(&self, other: &SpinClassFun) -> Self {
        let mut out = self.clone();
        for (r, v) in &other.values {
            out.add_at(r.clone(), v.clone());
        }
        out
    }

    pub fn sub(&self, other: &SpinClassFun) -> Self {
        self.add(&other.scale(&CycScalar::from_int(-1)))
    }

    /// `{"n": int, "values": [{"rho": doc, "value": CycScalar}]}` over all of `OP_n`.
    pub fn to_doc(&self, g: &GammaData) -> Value {
        let names: Vec<String> = g.classes.iter().map(|c| c.name.clone()).collect();
        let values: Vec<Value> = enumerate(PartitionKind::Odd, self.n, g.num_classes())
            .iter()
            .map(|r| json!({"rho": r.to_doc(&names), "value": self.get(r)}))
            .collect();
        json!({"n": self.n, "values": values})
    }
}

/// `f ⊗ g` values indexed by `(ρ′, ρ″)`.
pub type SpinTensor = BTreeMap<(MultiPartition, MultiPartition), CycScalar>;

fn rational_of(b: &BigInt) -> Rational {
    Rational::from_integer(b.clone())
}

/// Context for class functions of one group Γ.
pub struct SpinAlgebra {
    pub gamma: GammaData,
    /// Fock space of the standard form, used by `ch_inverse`.
    pub standard: FockSpace,
    aprime: Mutex<HashMap<MultiPartition, FockVector>>,
    inverse_cache: Mutex<HashMap<FockMonomial, SpinClassFun>>,
}

impl SpinAlgebra {
    pub fn new(gamma: GammaData) -> Self {
        let standard = FockSpace::standard(&gamma);
        SpinAlgebra { gamma, standard, aprime: Mutex::new(HashMap::new()), inverse_cache: Mutex::new(HashMap::new()) }
    }

    pub fn k(&self) -> usize {
        self.gamma.num_classes()
    }

    /// Canonical column order `OP_n(Γ_*)`.
    pub fn classes(&self, n: usize) -> Vec<MultiPartition> {
        enumerate(PartitionKind::Odd, n, self.k())
    }

    pub fn big_z(&self, rho: &MultiPartition) -> Rational {
        rational_of(&rho.big_z(&self.gamma))
    }

    fn xi_weight(&self, rho: &MultiPartition, xi_vals: &[CycScalar]) -> CycScalar {
        let mut w = CycScalar::one();
        for (c, p) in rho.0.iter().enumerate() {
            if !p.is_empty() {
                w = &w * &xi_vals[c].pow(p.len() as u32);
            }
        }
        w
    }

    /// `Σ_ρ f(ρ) g(ρ̄) ∏_c ξ(c)^{l(ρ(c))} / (2^{l(ρ)} Z_ρ)`.
    pub fn weighted_inner(&self, f: &SpinClassFun, g: &SpinClassFun, xi: &VirtualChar) -> Result<CycScalar, FockError> {
        if f.n != g.n {
            return Err(FockError::Degree(f.n, g.n));
        }
        let xv = xi.values(&self.gamma);
        let mut acc = CycScalar::zero();
        for (rho, fv) in &f.values {
            let gv = g.get(&rho.bar(&self.gamma));
            if gv.is_zero() {
                continue;
            }
            let w = self.xi_weight(rho, &xv);
            let denom = self.big_z(rho) * Rational::from_integer(BigInt::from(1) << rho.length());
            acc = acc + (&(fv * &gv) * &w).scale(&denom.recip());
        }
        Ok(acc)
    }

    pub fn standard_inner(&self, f: &SpinClassFun, g: &SpinClassFun) -> Result<CycScalar, FockError> {
        self.weighted_inner(f, g, &VirtualChar::standard(self.k()))
    }

    /// `2^{l(ρ)} ∏_c γ(c)^{l(ρ(c))}` on `D_ρ⁺`, for any character vector.
    pub fn basic_char_closed(&self, n: usize, gamma: &[CycScalar]) -> SpinClassFun {
        let vals = self.gamma.class_values(gamma);
        let mut f = SpinClassFun::zero(n);
        for rho in self.classes(n) {
            let w = self.xi_weight(&rho, &vals).scale(&Rational::from_integer(BigInt::from(1) << rho.length()));
            f.set(rho, w);
        }
        f
    }

    /// Basic spin character of a virtual character; for a genuine one the
    /// closed form, otherwise the alternating sum over induction products
    /// `Σ_m (−1)^m χ_{n−m}(β) · χ_m(γ)` with `ξ = β − γ`.
    pub fn basic_char(&self, n: usize, xi: &VirtualChar) -> SpinClassFun {
        if xi.is_genuine() {
            return self.basic_char_closed(n, &xi.as_char_vector());
        }
        let pos: Vec<CycScalar> = xi.coeffs.iter().map(|&c| CycScalar::from_int(c.max(0))).collect();
        let neg: Vec<CycScalar> = xi.coeffs.iter().map(|&c| CycScalar::from_int((-c).max(0))).collect();
        self.basic_char_difference(n, &pos, &neg)
    }

    /// `χ_n(β − γ)` for genuine character vectors β and γ.
    pub fn basic_char_difference(&self, n: usize, beta: &[CycScalar], gamma: &[CycScalar]) -> SpinClassFun {
        let mut acc = SpinClassFun::zero(n);
        for m in 0..=n {
            let left = self.basic_char_closed(n - m, beta);
            let right = self.basic_char_closed(m, gamma);
            let prod = self.induction_product(&left, &right);
            let sign = if m % 2 == 0 { 1 } else { -1 };
            acc = acc.add(&prod.scale(&CycScalar::from_int(sign)));
        }
        acc
    }

    /// `σ_n(c)`: value `n ζ_c` on the class of type `(n)` at `c`.
    pub fn sigma(&self, n: usize, c: usize) -> Result<SpinClassFun, FockError> {
        if n % 2 == 0 {
            return Err(FockError::BadMode(n as i64));
        }
        let mut f = SpinClassFun::zero(n);
        let rho = MultiPartition::single(self.k(), c, Partition(vec![n as u32]));
        f.set(rho, CycScalar::from_int((n as u64 * self.gamma.zeta_c(c)) as i64));
        Ok(f)
    }

    /// `σ_n(γ)`: value `n γ(c)` on the class of type `(n)` at `c`.
    pub fn sigma_gamma(&self, n: usize, gamma: &[CycScalar]) -> Result<SpinClassFun, FockError> {
        if n % 2 == 0 {
            return Err(FockError::BadMode(n as i64));
        }
        let vals = self.gamma.class_values(gamma);
        let mut f = SpinClassFun::zero(n);
        for (c, v) in vals.iter().enumerate() {
            let rho = MultiPartition::single(self.k(), c, Partition(vec![n as u32]));
            f.set(rho, v.scale(&Rational::from_integer(BigInt::from(n))));
        }
        Ok(f)
    }

    /// `σ_ρ = ∏ σ_r(c)^{m_r(c)}` via induction products.
    pub fn sigma_rho(&self, rho: &MultiPartition) -> Result<SpinClassFun, FockError> {
        let mut acc = SpinClassFun::unit(self.k());
        for (c, p) in rho.0.iter().enumerate() {
            for &part in p.parts() {
                acc = self.induction_product(&acc, &self.sigma(part as usize, c)?);
            }
        }
        Ok(acc)
    }

    /// `(f·g)(ρ) = Z_ρ Σ_{ρ′ ⊎ ρ″ = ρ} f(ρ′) g(ρ″) / (Z_{ρ′} Z_{ρ″})`.
    pub fn induction_product(&self, f: &SpinClassFun, g: &SpinClassFun) -> SpinClassFun {
        let mut out = SpinClassFun::zero(f.n + g.n);
        for (r1, v1) in &f.values {
            let z1 = self.big_z(r1);
            for (r2, v2) in &g.values {
                let rho = r1.union(r2);
                let w = self.big_z(&rho) / (&z1 * self.big_z(r2));
                out.add_at(rho, (v1 * v2).scale(&w));
            }
        }
        out
    }

    fn a_prime(&self, rho: &MultiPartition) -> FockVector {
        if let Some(v) = self.aprime.lock().expect("cache").get(rho) {
            return v.clone();
        }
        let v = a_prime_vector(&self.standard, &self.gamma, rho).expect("odd parts");
        self.aprime.lock().expect("cache").insert(rho.clone(), v.clone());
        v
    }

    /// `ch(f) = Σ_ρ (1/Z_ρ) f(ρ) a′_{−ρ̄}`.
    pub fn ch(&self, f: &SpinClassFun) -> FockVector {
        let mut out = FockVector::zero();
        for (rho, v) in &f.values {
            let c = v.scale(&self.big_z(rho).recip());
            out.add_scaled(&self.a_prime(&rho.bar(&self.gamma)), &c);
        }
        out
    }

    /// Inverse of `ch` on a homogeneous vector: `f(μ) = 2^{l(μ)} ⟨v, a′_{−μ}⟩`.
    pub fn ch_inverse(&self, v: &FockVector) -> Result<SpinClassFun, FockError> {
        if v.is_zero() {
            return Ok(SpinClassFun::zero(0));
        }
        let n = v.homogeneous_degree().ok_or(FockError::Inhomogeneous)?;
        Ok(self.ch_inverse_in_degree(v, n))
    }

    pub fn ch_inverse_in_degree(&self, v: &FockVector, n: usize) -> SpinClassFun {
        let mut f = SpinClassFun::zero(n);
        for mu in self.classes(n) {
            let x = self.standard.inner(v, &self.a_prime(&mu));
            if !x.is_zero() {
                f.set(mu.clone(), x.scale(&Rational::from_integer(BigInt::from(1) << mu.length())));
            }
        }
        f
    }

    fn ch_inverse_monomial(&self, m: &FockMonomial) -> SpinClassFun {
        if let Some(f) = self.inverse_cache.lock().expect("cache").get(m) {
            return f.clone();
        }
        let f = self.ch_inverse_in_degree(&FockVector::monomial(m.clone(), CycScalar::one()), m.degree());
        self.inverse_cache.lock().expect("cache").insert(m.clone(), f.clone());
        f
    }

    /// Restriction coproduct through the Fock side: `(ch⁻¹ ⊗ ch⁻¹) ∘ Δ ∘ ch`.
    pub fn restriction_coproduct(&self, f: &SpinClassFun) -> SpinTensor {
        let t = coproduct(&self.ch(f));
        let mut out = SpinTensor::new();
        for ((a, b), c) in &t {
            let fa = self.ch_inverse_monomial(a);
            let fb = self.ch_inverse_monomial(b);
            for (r1, v1) in &fa.values {
                for (r2, v2) in &fb.values {
                    let key = (r1.clone(), r2.clone());
                    let val = &(v1 * v2) * c;
                    let s = out.get(&key).map(|x| x + &val).unwrap_or(val);
                    if s.is_zero() {
                        out.remove(&key);
                    } else {
                        out.insert(key, s);
                    }
                }
            }
        }
        out
    }

    /// `⟨f ⊗ g, T⟩_ξ` with the product of weighted forms.
    pub fn tensor_inner(&self, f: &SpinClassFun, g: &SpinClassFun, t: &SpinTensor, xi: &VirtualChar) -> CycScalar {
        let xv = xi.values(&self.gamma);
        let weight = |rho: &MultiPartition| {
            let denom = self.big_z(rho) * Rational::from_integer(BigInt::from(1) << rho.length());
            self.xi_weight(rho, &xv).scale(&denom.recip())
        };
        let mut acc = CycScalar::zero();
        for ((r1, r2), c) in t {
            if r1.weight() != f.n || r2.weight() != g.n {
                continue;
            }
            let a = f.get(&r1.bar(&self.gamma));
            let b = g.get(&r2.bar(&self.gamma));
            if a.is_zero() || b.is_zero() {
                continue;
            }
            acc = acc + &(&(&a * &b) * c) * &(&weight(r1) * &weight(r2));
        }
        acc
    }

    /// `ã_{−n}(γ) f = σ_n(γ) · f`.
    pub fn heis_raise(&self, f: &SpinClassFun, n: usize, gamma: &[CycScalar]) -> Result<SpinClassFun, FockError> {
        Ok(self.induction_product(&self.sigma_gamma(n, gamma)?, f))
    }

    /// `ã_n(γ) f`: restrict, then pair the degree-`n` factor with `σ_n(γ)` under `⟨·,·⟩_ξ`.
    pub fn heis_lower(&self, f: &SpinClassFun, n: usize, gamma: &[CycScalar], xi: &VirtualChar) -> Result<SpinClassFun, FockError> {
        let sigma = self.sigma_gamma(n, gamma)?;
        let xv = xi.values(&self.gamma);
        let t = self.restriction_coproduct(f);
        let mut out = SpinClassFun::zero(f.n.saturating_sub(n));
        if f.n < n {
            return Ok(out);
        }
        for ((r1, r2), c) in &t {
            if r1.weight() != n {
                continue;
            }
            let s = sigma.get(&r1.bar(&self.gamma));
            if s.is_zero() {
                continue;
            }
            let denom = self.big_z(r1) * Rational::from_integer(BigInt::from(1) << r1.length());
            let w = (&(&s * c) * &self.xi_weight(r1, &xv)).scale(&denom.recip());
            out.add_at(r2.clone(), w);
        }
        Ok(out)
    }

    /// Character vector of the dual `γ̄`.
    pub fn dual_vector(&self, gamma: &[CycScalar]) -> Vec<CycScalar> {
        let mut out = vec![CycScalar::zero(); self.k()];
        for (i, c) in gamma.iter().enumerate() {
            let j = self.gamma.dual_index(i);
            out[j] = &out[j] + c;
        }
        out
    }

    /// `a_n(c)` creation/annihilation as a character vector.
    pub fn class_vector(&self, c: usize) -> Vec<CycScalar> {
        class_generator(&self.gamma, c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gamma::builtin;
    use crate::scalars::rat;

    fn alg(name: &str) -> SpinAlgebra {
        SpinAlgebra::new(builtin(name).unwrap().data)
    }

    fn mp(parts: &[&[u32]]) -> MultiPartition {
        MultiPartition(parts.iter().map(|p| Partition(p.to_vec())).collect())
    }

    #[test]
    fn basic_inner_products() {
        let a = alg("trivial");
        let chi1 = a.basic_char(1, &VirtualChar::standard(1));
        assert_eq!(chi1.get(&mp(&[&[1]])), CycScalar::from_int(2));
        assert_eq!(a.standard_inner(&chi1, &chi1).unwrap(), CycScalar::from_int(2));
        let s1 = a.sigma(1, 0).unwrap();
        assert_eq!(a.standard_inner(&s1, &s1).unwrap(), CycScalar::from_rational(rat(1, 2)));
    }

    #[test]
    fn basic_char_values() {
        let a = alg("trivial");
        let chi = a.basic_char(3, &VirtualChar::standard(1));
        assert_eq!(chi.get(&mp(&[&[1, 1, 1]])), CycScalar::from_int(8));
        assert_eq!(chi.get(&mp(&[&[3]])), CycScalar::from_int(2));
        let b = alg("cyclic:2");
        let chi = b.basic_char(3, &VirtualChar { coeffs: vec![0, 1] });
        assert_eq!(chi.get(&mp(&[&[1], &[1, 1]])), CycScalar::from_int(8));
        let zero = b.basic_char_difference(3, &b.gamma.basis(0), &b.gamma.basis(0));
        assert!(zero.is_zero());
    }

    #[test]
    fn sigma_products() {
        let a = alg("trivial");
        let s3 = a.sigma(3, 0).unwrap();
        assert_eq!(s3.get(&mp(&[&[3]])), CycScalar::from_int(3));
        assert!(s3.get(&mp(&[&[1, 1, 1]])).is_zero());
        let s11 = a.induction_product(&a.sigma(1, 0).unwrap(), &a.sigma(1, 0).unwrap());
        assert_eq!(s11.get(&mp(&[&[1, 1]])), CycScalar::from_int(2));
        let c3 = alg("cyclic:3");
        for rho in c3.classes(3) {
            let s = c3.sigma_rho(&rho).unwrap();
            let z = c3.big_z(&rho);
            assert_eq!(s.get(&rho), CycScalar::from_rational(z));
            assert_eq!(s.support().count(), 1);
        }
    }

    #[test]
    fn characteristic_map() {
        let a = alg("trivial");
        let s3 = a.sigma(3, 0).unwrap();
        assert_eq!(a.ch(&s3), FockVector::monomial(FockMonomial::new(vec![(3, 0)]), CycScalar::one()));
        let chi1 = a.basic_char(1, &VirtualChar::standard(1));
        assert_eq!(a.ch(&chi1), FockVector::monomial(FockMonomial::new(vec![(1, 0)]), CycScalar::from_int(2)));
        let c3 = alg("cyclic:3");
        for rho in c3.classes(3) {
            let s = c3.sigma_rho(&rho).unwrap();
            assert_eq!(c3.ch_inverse(&c3.ch(&s)).unwrap(), s);
        }
    }

    #[test]
    fn sigma_is_primitive() {
        let a = alg("cyclic:3");
        let s = a.sigma(3, 1).unwrap();
        let t = a.restriction_coproduct(&s);
        let unit = MultiPartition::empty(3);
        let rho = mp(&[&[], &[3], &[]]);
        assert_eq!(t.len(), 2);
        assert_eq!(t[&(rho.clone(), unit.clone())], CycScalar::from_int(9));
        assert_eq!(t[&(unit, rho)], CycScalar::from_int(9));
    }
}
