//! Schur Q-functions through vertex operators and the spin super character
//! table of the wreath product.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::classfun::{SpinAlgebra, SpinClassFun};
use crate::error::ChartableError;
use crate::fock::{a_prime_vector, FockSpace, FockVector};
use crate::gamma::GammaData;
use crate::partitions::{enumerate, MultiPartition, Partition, PartitionKind};
use crate::scalars::{rint, CycScalar, Rational};
use crate::vertex::{TwistedSpace, TwistedVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ModuleType {
    M,
    Q,
}

impl ModuleType {
    pub fn of(lambda: &MultiPartition) -> Self {
        if lambda.length() % 2 == 0 {
            ModuleType::M
        } else {
            ModuleType::Q
        }
    }

    /// Norm of the character under the standard spin inner product.
    pub fn norm(self) -> i64 {
        match self {
            ModuleType::M => 1,
            ModuleType::Q => 2,
        }
    }
}

impl fmt::Display for ModuleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModuleType::M => write!(f, "M"),
            ModuleType::Q => write!(f, "Q"),
        }
    }
}

/// `q_{φ_1}(γ_i) ⋯ q_{φ_m}(γ_i)` with `q_0 = 1` and `q_{<0} = 0`.
pub fn q_power_product(space: &FockSpace, phi: &[i64], i: usize) -> FockVector {
    if phi.iter().any(|&p| p < 0) {
        return FockVector::zero();
    }
    let max = phi.iter().copied().max().unwrap_or(0) as usize;
    let basis: Vec<CycScalar> = (0..space.rank()).map(|j| if j == i { CycScalar::one() } else { CycScalar::zero() }).collect();
    let q = space.q_series(&basis, max).expect("basis vector has the right length");
    phi.iter().fold(FockVector::vacuum(), |acc, &p| acc.mul(&q[p as usize]))
}

/// Coefficients of `∏_{i<j} (1 − R_ij)/(1 + R_ij)` applied to `x_λ`, keyed by
/// the resulting index tuples (entries nonnegative).
///
/// Pairs are processed by decreasing second index, so each entry receives all
/// its raisings before its lowerings and a negative entry can be dropped.
pub fn raising_coefficients(lambda: &Partition) -> BTreeMap<Vec<i64>, i64> {
    let l = lambda.len();
    let mut cur: BTreeMap<Vec<i64>, i64> = BTreeMap::new();
    cur.insert(lambda.parts().iter().map(|&p| p as i64).collect(), 1);
    for j in (1..l).rev() {
        for i in (0..j).rev() {
            let mut next: BTreeMap<Vec<i64>, i64> = BTreeMap::new();
            for (phi, c) in &cur {
                *next.entry(phi.clone()).or_default() += c;
                let mut k = 1;
                while phi[j] - k >= 0 {
                    let mut psi = phi.clone();
                    psi[i] += k;
                    psi[j] -= k;
                    let sign = if k % 2 == 0 { 1 } else { -1 };
                    *next.entry(psi).or_default() += 2 * sign * c;
                    k += 1;
                }
            }
            next.retain(|_, c| *c != 0);
            cur = next;
        }
    }
    cur
}

/// The transition to products of q's indexed by partitions: `x_λ + Σ c_μ x_μ`.
pub fn transition_coefficients(lambda: &Partition) -> BTreeMap<Partition, i64> {
    let mut out: BTreeMap<Partition, i64> = BTreeMap::new();
    for (phi, c) in raising_coefficients(lambda) {
        let parts: Vec<u32> = phi.iter().filter(|&&p| p > 0).map(|&p| p as u32).collect();
        *out.entry(Partition::new(parts)).or_default() += c;
    }
    out.retain(|_, c| *c != 0);
    out
}

/// `Q_λ = ∏_γ ∏_{i<j} (1−R_ij)/(1+R_ij) x_{λ(γ)}` on the standard Fock space.
pub fn raising_expand(space: &FockSpace, lambda: &MultiPartition) -> Result<FockVector, ChartableError> {
    check_strict(lambda)?;
    let mut acc = FockVector::vacuum();
    for (i, p) in lambda.0.iter().enumerate() {
        if p.is_empty() {
            continue;
        }
        let mut qi = FockVector::zero();
        for (phi, c) in raising_coefficients(p) {
            qi.add_scaled(&q_power_product(space, &phi, i), &CycScalar::from_int(c));
        }
        acc = acc.mul(&qi);
    }
    Ok(acc)
}

fn check_strict(lambda: &MultiPartition) -> Result<(), ChartableError> {
    match lambda.0.iter().position(|p| !p.is_strict()) {
        Some(i) => Err(ChartableError::NotStrict(i)),
        None => Ok(()),
    }
}

/// `[λ] = Σ_i l(λ(γ_i)) γ_i`.
pub fn lattice_class(lambda: &MultiPartition) -> Vec<i64> {
    lambda.0.iter().map(|p| p.len() as i64).collect()
}

/// `X_λ e^{−[λ]}` with `X_λ = ∏_{i=0}^{r} X_{−λ_1}(γ_i) ⋯ X_{−λ_l}(γ_i)`, rightmost first.
pub fn x_lambda_vector(space: &TwistedSpace, lambda: &MultiPartition) -> Result<TwistedVector, ChartableError> {
    check_strict(lambda)?;
    let start: Vec<i64> = lattice_class(lambda).iter().map(|x| -x).collect();
    let mut v = TwistedVector::vacuum(space.f2.coset_of(&start));
    for (i, p) in lambda.0.iter().enumerate().rev() {
        let g = space.unit(i);
        for &part in p.parts().iter().rev() {
            v = space.x_component(-(part as i64), &g, &v);
        }
    }
    Ok(v)
}

/// Splits `X_λ e^{−[λ]}` into a fourth root of unity times a Fock vector in the
/// zero coset, and checks the Fock vector against the raising-operator path.
pub fn q_function_dual_path(space: &TwistedSpace, lambda: &MultiPartition) -> Result<(CycScalar, FockVector), ChartableError> {
    let v = x_lambda_vector(space, lambda)?;
    if let Some(t) = v.cosets().into_iter().find(|&t| t != 0) {
        return Err(ChartableError::WrongCoset(t));
    }
    let fock = v.fock_part(0);
    let expect = raising_expand(&space.fock, lambda)?;
    let (m, c) = expect.terms().iter().next().ok_or_else(|| ChartableError::Check(format!("Q vanishes for {lambda}")))?;
    let ratio = fock.coeff(m).div_rational(&c.as_rational().expect("Q coefficients are rational")).map_err(|e| ChartableError::Check(e.to_string()))?;
    if !ratio.pow(4).is_one() {
        return Err(ChartableError::Check(format!("phase {ratio} for {lambda} is not a fourth root of unity")));
    }
    if fock != expect.scale(&ratio) {
        return Err(ChartableError::Check(format!("vertex path differs from raising path for {lambda}: {fock} vs {expect}")));
    }
    Ok((ratio, expect))
}

fn pow2(e: i64) -> Rational {
    if e >= 0 {
        Rational::from_integer(BigInt::one() << e as usize)
    } else {
        Rational::new(BigInt::one(), BigInt::one() << (-e) as usize)
    }
}

/// `2^{l(μ) − ⌊l(λ)/2⌋} ⟨Q_λ, a′_{−μ̄}⟩`; pairing with `μ̄` keeps the row labelled
/// by `λ` rather than by its dual on classes that are not real.
pub fn char_value_from(space: &FockSpace, g: &GammaData, q_lambda: &FockVector, lambda: &MultiPartition, mu: &MultiPartition) -> Result<CycScalar, ChartableError> {
    if lambda.weight() != mu.weight() {
        return Err(ChartableError::Weight(lambda.weight(), mu.weight()));
    }
    let a = a_prime_vector(space, g, &mu.bar(g))?;
    let e = mu.length() as i64 - (lambda.length() / 2) as i64;
    Ok(space.inner(q_lambda, &a).scale(&pow2(e)))
}

pub fn char_value(space: &TwistedSpace, lambda: &MultiPartition, mu: &MultiPartition) -> Result<CycScalar, ChartableError> {
    let (_, q) = q_function_dual_path(space, lambda)?;
    char_value_from(&space.fock, &space.gamma, &q, lambda, mu)
}

/// `2^{n−⌊l/2⌋} n! ∏_γ (deg γ^{|λ(γ)|} / ∏ λ_i!) ∏_{i<j} (λ_i−λ_j)/(λ_i+λ_j)`.
pub fn char_degree(g: &GammaData, lambda: &MultiPartition) -> Result<BigInt, ChartableError> {
    check_strict(lambda)?;
    let n = lambda.weight();
    let mut acc = pow2(n as i64 - (lambda.length() / 2) as i64) * rint(1);
    acc *= Rational::from_integer((1..=n as u64).fold(BigInt::one(), |a, k| a * k));
    for (i, p) in lambda.0.iter().enumerate() {
        let d = BigInt::from(g.degree(i));
        acc *= Rational::from_integer(num_traits::pow(d, p.weight()));
        for &part in p.parts() {
            acc /= Rational::from_integer((1..=part as u64).fold(BigInt::one(), |a, k| a * k));
        }
        let parts = p.parts();
        for a in 0..parts.len() {
            for b in a + 1..parts.len() {
                acc *= Rational::new(BigInt::from(parts[a] - parts[b]), BigInt::from(parts[a] + parts[b]));
            }
        }
    }
    if !acc.is_integer() {
        return Err(ChartableError::NonIntegerDegree(lambda.to_string()));
    }
    Ok(acc.to_integer())
}

#[derive(Clone, Debug)]
pub struct CharRow {
    pub lambda: MultiPartition,
    pub module_type: ModuleType,
    pub degree: BigInt,
    pub values: Vec<CycScalar>,
}

#[derive(Clone, Debug)]
pub struct CharTable {
    pub gamma: GammaData,
    pub n: usize,
    pub columns: Vec<MultiPartition>,
    pub rows: Vec<CharRow>,
}

impl CharTable {
    pub fn row_function(&self, r: usize) -> SpinClassFun {
        let mut f = SpinClassFun::zero(self.n);
        for (mu, v) in self.columns.iter().zip(&self.rows[r].values) {
            f.set(mu.clone(), v.clone());
        }
        f
    }

    /// Values as a matrix of small integers, when they all are.
    pub fn integer_values(&self) -> Option<Vec<Vec<i64>>> {
        self.rows.iter().map(|r| r.values.iter().map(|v| v.to_i64()).collect()).collect()
    }

    pub fn to_doc(&self) -> Value {
        let class_names: Vec<String> = self.gamma.classes.iter().map(|c| c.name.clone()).collect();
        json!({
            "gamma": self.gamma.name,
            "n": self.n,
            "xi": "standard",
            "columns": self.columns.iter().map(|c| c.to_doc(&class_names)).collect::<Vec<_>>(),
            "rows": self.rows.iter().map(|r| json!({
                "lambda": r.lambda.to_doc(&self.gamma.char_names),
                "type": r.module_type,
                "degree": big_to_value(&r.degree),
                "values": r.values,
            })).collect::<Vec<_>>(),
        })
    }
}

fn big_to_value(b: &BigInt) -> Value {
    match b.to_i64() {
        Some(x) => Value::from(x),
        None => Value::from(b.to_string()),
    }
}

/// Column index of the identity type `(1ⁿ)` at the identity class.
fn identity_column(columns: &[MultiPartition], k: usize, n: usize) -> Option<usize> {
    let id = MultiPartition::identity_type(k, n);
    columns.iter().position(|c| *c == id)
}

fn build_row(space: &TwistedSpace, columns: &[MultiPartition], lambda: &MultiPartition) -> Result<CharRow, ChartableError> {
    let (_, q) = q_function_dual_path(space, lambda)?;
    let mut values = columns
        .iter()
        .map(|mu| char_value_from(&space.fock, &space.gamma, &q, lambda, mu))
        .collect::<Result<Vec<_>, _>>()?;
    let n = lambda.weight();
    let id = identity_column(columns, space.gamma.num_classes(), n).expect("identity type is an odd multipartition");
    let degree = values[id].as_rational().filter(|r| r.is_integer()).ok_or_else(|| ChartableError::NonIntegerDegree(lambda.to_string()))?;
    let mut degree = degree.to_integer();
    if degree.is_negative() {
        values = values.iter().map(|v| -v).collect();
        degree = -degree;
    }
    Ok(CharRow { module_type: ModuleType::of(lambda), lambda: lambda.clone(), degree, values })
}

/// Determinant by Laplace expansion over column subsets; exact and division free.
pub fn determinant(m: &[Vec<CycScalar>]) -> CycScalar {
    let n = m.len();
    if n == 0 {
        return CycScalar::one();
    }
    // dp[mask] = determinant of the rows 0..popcount(mask) restricted to columns in mask
    let mut dp = vec![CycScalar::zero(); 1 << n];
    dp[0] = CycScalar::one();
    for mask in 1usize..(1 << n) {
        let r = mask.count_ones() as usize - 1;
        let mut acc = CycScalar::zero();
        for c in 0..n {
            if mask >> c & 1 == 1 {
                let rest = mask & !(1 << c);
                // expansion along row r: sign (−1)^{r − position of c} = (−1)^{#chosen columns after c}
                let remaining_after = (mask >> (c + 1)).count_ones() as usize;
                if !dp[rest].is_zero() && !m[r][c].is_zero() {
                    let term = &dp[rest] * &m[r][c];
                    if remaining_after % 2 == 0 {
                        acc = acc + term;
                    } else {
                        acc = acc - term;
                    }
                }
            }
        }
        dp[mask] = acc;
    }
    dp[(1 << n) - 1].clone()
}

/// Largest table on which the determinant is computed; beyond it invertibility
/// follows from the row orthogonality check.
pub const DETERMINANT_LIMIT: usize = 18;

/// `OP_n(Γ_*)` grouped by weight distribution, partitions in increasing
/// lexicographic order within a group, so `(1ⁿ)` comes first.
pub fn table_columns(n: usize, k: usize) -> Vec<MultiPartition> {
    let mut cols = enumerate(PartitionKind::Odd, n, k);
    cols.sort_by(|a, b| {
        let wa: Vec<usize> = a.0.iter().map(|p| p.weight()).collect();
        let wb: Vec<usize> = b.0.iter().map(|p| p.weight()).collect();
        wb.cmp(&wa).then_with(|| a.0.cmp(&b.0))
    });
    cols
}

pub fn build_table(gamma: &GammaData, n: usize, check: bool) -> Result<CharTable, ChartableError> {
    let space = TwistedSpace::standard(gamma.clone());
    let k = gamma.num_classes();
    let columns = table_columns(n, k);
    let lambdas = enumerate(PartitionKind::Strict, n, k);
    let rows = lambdas.par_iter().map(|l| build_row(&space, &columns, l)).collect::<Result<Vec<_>, _>>()?;
    let table = CharTable { gamma: gamma.clone(), n, columns, rows };
    if check {
        check_table(&table)?;
    }
    Ok(table)
}

/// Squareness, row norms, degree formula, invertibility and the unitriangular
/// transition to products of q's.
pub fn check_table(t: &CharTable) -> Result<(), ChartableError> {
    if t.rows.len() != t.columns.len() {
        return Err(ChartableError::Check(format!("{} rows vs {} columns", t.rows.len(), t.columns.len())));
    }
    let alg = SpinAlgebra::new(t.gamma.clone());
    let fs: Vec<SpinClassFun> = (0..t.rows.len()).map(|r| t.row_function(r)).collect();
    for a in 0..fs.len() {
        for b in a..fs.len() {
            let ip = alg.standard_inner(&fs[a], &fs[b])?;
            let expect = if a == b { t.rows[a].module_type.norm() } else { 0 };
            if ip != CycScalar::from_int(expect) {
                return Err(ChartableError::Check(format!(
                    "<chi_{}, chi_{}> = {ip}, expected {expect}",
                    t.rows[a].lambda, t.rows[b].lambda
                )));
            }
        }
    }
    for row in &t.rows {
        let d = char_degree(&t.gamma, &row.lambda)?;
        if d != row.degree {
            return Err(ChartableError::Check(format!("degree of {}: formula {d}, table {}", row.lambda, row.degree)));
        }
        for p in &row.lambda.0 {
            check_transition(p)?;
        }
    }
    if t.rows.len() <= DETERMINANT_LIMIT {
        let m: Vec<Vec<CycScalar>> = t.rows.iter().map(|r| r.values.clone()).collect();
        if determinant(&m).is_zero() {
            return Err(ChartableError::Check("singular table".into()));
        }
    }
    Ok(())
}

/// Leading coefficient 1 at `λ`, every other partition strictly dominates `λ`.
pub fn check_transition(lambda: &Partition) -> Result<(), ChartableError> {
    let tc = transition_coefficients(lambda);
    if tc.get(lambda) != Some(&1) {
        return Err(ChartableError::Check(format!("leading transition coefficient of {lambda} is {:?}", tc.get(lambda))));
    }
    for mu in tc.keys() {
        if mu != lambda && !(mu.dominates(lambda) && mu != lambda) {
            return Err(ChartableError::Check(format!("transition term {mu} of {lambda} does not dominate it")));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::FockMonomial;
    use crate::gamma::builtin;
    use crate::scalars::rat;

    fn trivial() -> GammaData {
        builtin("trivial").unwrap().data
    }

    fn single(parts: Vec<u32>) -> MultiPartition {
        MultiPartition(vec![Partition::new(parts)])
    }

    fn a(f: &[(u32, usize)]) -> FockVector {
        FockVector::monomial(FockMonomial::new(f.to_vec()), CycScalar::one())
    }

    #[test]
    fn q_products() {
        let s = FockSpace::standard(&trivial());
        assert_eq!(q_power_product(&s, &[1], 0), a(&[(1, 0)]).scale(&CycScalar::from_int(2)));
        assert!(q_power_product(&s, &[2, -1], 0).is_zero());
        assert_eq!(q_power_product(&s, &[2, 1], 0), a(&[(1, 0), (1, 0), (1, 0)]).scale(&CycScalar::from_int(4)));
    }

    #[test]
    fn q21() {
        let s = FockSpace::standard(&trivial());
        let q = raising_expand(&s, &single(vec![2, 1])).unwrap();
        let expect = a(&[(1, 0), (1, 0), (1, 0)]).sub(&a(&[(3, 0)])).scale(&CycScalar::from_rational(rat(4, 3)));
        assert_eq!(q, expect);
        let tc = transition_coefficients(&Partition::new(vec![2, 1]));
        assert_eq!(tc.get(&Partition::new(vec![3])), Some(&-2));
        assert_eq!(tc.len(), 2);
    }

    #[test]
    fn three_row_transition() {
        for p in [vec![3, 2, 1], vec![4, 2, 1], vec![5, 3, 1]] {
            check_transition(&Partition::new(p)).unwrap();
        }
    }

    #[test]
    fn trivial_n3() {
        let t = build_table(&trivial(), 3, true).unwrap();
        assert_eq!(t.integer_values().unwrap(), vec![vec![8, 2], vec![4, -2]]);
        assert_eq!(t.rows[0].module_type, ModuleType::Q);
        assert_eq!(t.rows[1].module_type, ModuleType::M);
    }

    #[test]
    fn small_values() {
        let sp = TwistedSpace::standard(trivial());
        assert_eq!(char_value(&sp, &single(vec![1]), &single(vec![1])).unwrap(), CycScalar::from_int(2));
        assert_eq!(char_degree(&trivial(), &single(vec![2, 1])).unwrap(), BigInt::from(4));
        assert_eq!(char_degree(&trivial(), &single(vec![4])).unwrap(), BigInt::from(16));
        let t = build_table(&trivial(), 0, true).unwrap();
        assert_eq!(t.integer_values().unwrap(), vec![vec![1]]);
    }

    #[test]
    fn determinant_small() {
        let m: Vec<Vec<CycScalar>> = vec![vec![1.into(), 2.into()], vec![3.into(), 4.into()]];
        assert_eq!(determinant(&m), CycScalar::from_int(-2));
        let m: Vec<Vec<CycScalar>> =
            vec![vec![2.into(), 0.into(), 1.into()], vec![1.into(), 3.into(), 0.into()], vec![0.into(), 1.into(), 4.into()]];
        assert_eq!(determinant(&m), CycScalar::from_int(25));
    }

    #[test]
    fn cyclic_tables() {
        let g = builtin("cyclic:2").unwrap().data;
        let t = build_table(&g, 2, true).unwrap();
        assert_eq!(t.rows.len(), 3);
        let g = builtin("cyclic:3").unwrap().data;
        build_table(&g, 2, true).unwrap();
    }
}

#[cfg(test)]
mod oracle_rows {
    use super::*;
    use crate::gamma::builtin;
    use crate::oracle::{basic_spin_trace, canonical_rep};

    #[test]
    fn degree_one_rows_match_traces() {
        for name in ["cyclic:3", "cyclic:4", "quaternion8"] {
            let b = builtin(name).unwrap();
            let t = build_table(&b.data, 1, true).unwrap();
            for row in &t.rows {
                let i = row.lambda.0.iter().position(|p| !p.is_empty()).unwrap();
                for (mu, v) in t.columns.iter().zip(&row.values) {
                    let tr = basic_spin_trace(&b, i, &canonical_rep(&b, mu)).unwrap();
                    assert_eq!(*v, tr, "{name} row {} column {}", row.lambda, mu);
                }
            }
        }
    }
}
