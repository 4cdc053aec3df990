//! Certifiers for the Heisenberg, isometry, Hopf and oracle relations, each
//! returning structured reports.

use std::collections::HashMap;

use num_bigint::BigInt;
use serde_json::json;

use crate::chartable::{build_table, raising_coefficients, CharTable};
use crate::classfun::{SpinAlgebra, SpinClassFun};
use crate::fock::{monomials_of_degree, FockSpace, FockVector};
use crate::gamma::{Builtin, VirtualChar};
use crate::oracle::{basic_spin_trace, canonical_rep, enumerate_classes_bruteforce, split_centralizer, ClassEnumeration, SpinElement};
use crate::partitions::{enumerate, MultiPartition, PartitionKind};
use crate::report::CheckReport;
use crate::scalars::{rat, CycScalar, Rational};

/// `[a_m(γ_i), a_{−n}(γ_j)] = (m/2) δ_{m,n} ⟨γ_i,γ_j⟩_ξ` on every monomial of degree ≤ `max_degree`.
pub fn heisenberg_check(space: &FockSpace, max_mode: u32, max_degree: usize) -> CheckReport {
    let params = json!({"max_mode": max_mode, "max_degree": max_degree, "rank": space.rank()});
    let r = space.rank();
    let monos: Vec<FockVector> = (0..=max_degree)
        .flat_map(|d| monomials_of_degree(d, r))
        .map(|m| FockVector::monomial(m, CycScalar::one()))
        .collect();
    let basis = |i: usize| -> Vec<CycScalar> { (0..r).map(|j| CycScalar::from_int((i == j) as i64)).collect() };
    let mut count = 0u64;
    for i in 0..r {
        for j in 0..r {
            let (gi, gj) = (basis(i), basis(j));
            let pair = space.pairing(&gi, &gj);
            for m in (1..=max_mode).step_by(2) {
                for n in (1..=max_mode).step_by(2) {
                    let c = if m == n { pair.scale(&rat(m as i64, 2)) } else { CycScalar::zero() };
                    for v in &monos {
                        let lhs = (|| -> Result<FockVector, crate::error::FockError> {
                            let ab = space.annihilate(&space.create(v, n as i64, &gj)?, m as i64, &gi)?;
                            let ba = space.create(&space.annihilate(v, m as i64, &gi)?, n as i64, &gj)?;
                            Ok(ab.sub(&ba))
                        })();
                        match lhs {
                            Ok(l) if l == v.scale(&c) => count += 1,
                            Ok(l) => {
                                return CheckReport::fail(
                                    "[a_m(g_i), a_-n(g_j)] = (m/2) delta <g_i,g_j>",
                                    params,
                                    format!("i={i} j={j} m={m} n={n} on {v}: got {l}"),
                                    count,
                                )
                            }
                            Err(e) => return CheckReport::fail("[a_m(g_i), a_-n(g_j)] = (m/2) delta <g_i,g_j>", params, e.to_string(), count),
                        }
                    }
                }
            }
        }
    }
    CheckReport::pass("[a_m(g_i), a_-n(g_j)] = (m/2) delta <g_i,g_j>", params, count)
}

/// The group-side operators `ã_{±n}(γ)` agree under `ch` with Fock modes of the dual `γ̄`.
pub fn heisenberg_transport_check(alg: &SpinAlgebra, xi: &VirtualChar, max_n: usize) -> CheckReport {
    let params = json!({"gamma": alg.gamma.name, "xi": xi.coeffs, "max_n": max_n});
    let name = "ch(a~_{+-n}(g) f) = a_{+-n}(g-bar) ch(f)";
    let space = match FockSpace::new(&alg.gamma, xi) {
        Ok(s) => s,
        Err(e) => return CheckReport::fail(name, params, e.to_string(), 0),
    };
    let mut count = 0;
    for total in 0..=max_n {
        for rho in alg.classes(total) {
            let f = match alg.sigma_rho(&rho) {
                Ok(f) => f,
                Err(e) => return CheckReport::fail(name, params, e.to_string(), count),
            };
            let chf = alg.ch(&f);
            for n in (1..=max_n).step_by(2) {
                for i in 0..alg.k() {
                    let g = alg.gamma.basis(i);
                    let dual = alg.dual_vector(&g);
                    if total + n <= max_n {
                        let lhs = alg.heis_raise(&f, n, &g).map(|h| alg.ch(&h));
                        let rhs = space.create(&chf, n as i64, &dual);
                        if lhs.as_ref().ok() != rhs.as_ref().ok() || lhs.is_err() {
                            return CheckReport::fail(name, params, format!("raise n={n} i={i} on sigma_{rho}"), count);
                        }
                        count += 1;
                    }
                    if n <= total {
                        let lhs = alg.heis_lower(&f, n, &g, xi).map(|h| alg.ch(&h));
                        let rhs = space.annihilate(&chf, n as i64, &dual);
                        if lhs.as_ref().ok() != rhs.as_ref().ok() || lhs.is_err() {
                            return CheckReport::fail(name, params, format!("lower n={n} i={i} on sigma_{rho}"), count);
                        }
                        count += 1;
                    }
                }
            }
        }
    }
    CheckReport::pass(name, params, count)
}

/// `⟨σ_ρ, σ_π⟩_ξ = ⟨ch σ_ρ, ch σ_π⟩′_ξ` for all `ρ, π ∈ OP_n`, `n ≤ max_n`.
pub fn isometry_check(alg: &SpinAlgebra, xi: &VirtualChar, max_n: usize) -> CheckReport {
    let name = "<f,g>_xi = <ch f, ch g>'_xi";
    let params = json!({"gamma": alg.gamma.name, "xi": xi.coeffs, "max_n": max_n});
    let space = match FockSpace::new(&alg.gamma, xi) {
        Ok(s) => s,
        Err(e) => return CheckReport::fail(name, params, e.to_string(), 0),
    };
    let mut count = 0;
    for n in 0..=max_n {
        let classes = alg.classes(n);
        let mut fs = Vec::with_capacity(classes.len());
        for rho in &classes {
            match alg.sigma_rho(rho) {
                Ok(f) => {
                    let c = alg.ch(&f);
                    fs.push((f, c));
                }
                Err(e) => return CheckReport::fail(name, params, e.to_string(), count),
            }
        }
        for a in 0..fs.len() {
            for b in a..fs.len() {
                let lhs = match alg.weighted_inner(&fs[a].0, &fs[b].0, xi) {
                    Ok(v) => v,
                    Err(e) => return CheckReport::fail(name, params, e.to_string(), count),
                };
                let rhs = space.inner(&fs[a].1, &fs[b].1);
                if lhs != rhs {
                    return CheckReport::fail(
                        name,
                        params,
                        format!("sigma_{} vs sigma_{}: {lhs} vs {rhs}", classes[a], classes[b]),
                        count,
                    );
                }
                count += 1;
            }
        }
    }
    CheckReport::pass(name, params, count)
}

/// `ch(f·g) = ch(f) ch(g)` over pairs of `σ` basis functions with total degree ≤ `max_n`.
pub fn hopf_product_check(alg: &SpinAlgebra, max_n: usize) -> CheckReport {
    let name = "ch(f.g) = ch(f) ch(g)";
    let params = json!({"gamma": alg.gamma.name, "max_n": max_n});
    let sigmas = sigma_basis(alg, max_n);
    let mut count = 0;
    for a in 0..=max_n {
        for b in 0..=(max_n - a) {
            for (rf, f, cf) in &sigmas[a] {
                for (rg, g, cg) in &sigmas[b] {
                    let lhs = alg.ch(&alg.induction_product(f, g));
                    let rhs = cf.mul(cg);
                    if lhs != rhs {
                        return CheckReport::fail(name, params, format!("sigma_{rf} . sigma_{rg}"), count);
                    }
                    count += 1;
                }
            }
        }
    }
    CheckReport::pass(name, params, count)
}

/// `⟨f·g, h⟩ = ⟨f ⊗ g, Δh⟩` under the standard form, over `σ` basis triples.
pub fn hopf_adjoint_check(alg: &SpinAlgebra, max_n: usize) -> CheckReport {
    let name = "<f.g, h> = <f (x) g, Delta h>";
    let params = json!({"gamma": alg.gamma.name, "max_n": max_n});
    let sigmas = sigma_basis(alg, max_n);
    let xi = VirtualChar::standard(alg.k());
    let mut count = 0;
    for n in 0..=max_n {
        for (rh, h, _) in &sigmas[n] {
            let dh = alg.restriction_coproduct(h);
            for a in 0..=n {
                for (rf, f, _) in &sigmas[a] {
                    for (rg, g, _) in &sigmas[n - a] {
                        let lhs = match alg.weighted_inner(&alg.induction_product(f, g), h, &xi) {
                            Ok(v) => v,
                            Err(e) => return CheckReport::fail(name, params, e.to_string(), count),
                        };
                        let rhs = alg.tensor_inner(f, g, &dh, &xi);
                        if lhs != rhs {
                            return CheckReport::fail(name, params, format!("f=sigma_{rf} g=sigma_{rg} h=sigma_{rh}: {lhs} vs {rhs}"), count);
                        }
                        count += 1;
                    }
                }
            }
        }
    }
    CheckReport::pass(name, params, count)
}

type SigmaEntry = (MultiPartition, SpinClassFun, FockVector);

fn sigma_basis(alg: &SpinAlgebra, max_n: usize) -> Vec<Vec<SigmaEntry>> {
    (0..=max_n)
        .map(|n| {
            alg.classes(n)
                .into_iter()
                .map(|rho| {
                    let f = alg.sigma_rho(&rho).expect("odd parts");
                    let c = alg.ch(&f);
                    (rho, f, c)
                })
                .collect()
        })
        .collect()
}

/// Brute-force classes against the split-class theorem and the centralizer formula.
pub fn oracle_class_checks(b: &Builtin, n: usize) -> Vec<CheckReport> {
    let params = json!({"gamma": b.data.name, "n": n});
    let e = match enumerate_classes_bruteforce(b, n) {
        Ok(e) => e,
        Err(err) => return vec![CheckReport::fail("class enumeration", params, err.to_string(), 0)],
    };
    let mut reports = Vec::new();

    let mismatch = e.classes.iter().find(|c| !c.type_constant || c.is_split != c.signed_type.is_split());
    reports.push(match mismatch {
        None => CheckReport::pass("split iff type condition", params.clone(), e.classes.len() as u64),
        Some(c) => CheckReport::fail("split iff type condition", params.clone(), format!("class of type {}", c.signed_type), 0),
    });

    let k = b.data.num_classes();
    let even_split = e.classes.iter().filter(|c| c.is_split && c.signed_type.parity() == 0).count() / 2;
    let odd_split = e.classes.iter().filter(|c| c.is_split && c.signed_type.parity() == 1).count() / 2;
    let op = enumerate(PartitionKind::Odd, n, k).len();
    let sp_minus = enumerate(PartitionKind::StrictOdd, n, k).len();
    reports.push(if even_split == op && odd_split == sp_minus {
        CheckReport::pass("split pair counts = |OP_n|, |SP_n^-|", params.clone(), 2)
    } else {
        CheckReport::fail(
            "split pair counts = |OP_n|, |SP_n^-|",
            params.clone(),
            format!("even {even_split} vs {op}, odd {odd_split} vs {sp_minus}"),
            0,
        )
    });

    let mut count = 0;
    let mut bad = None;
    for c in e.classes.iter().filter(|c| c.is_split && c.signed_type.parity() == 0) {
        let expect = split_centralizer(b, &c.signed_type.plus);
        if BigInt::from(c.centralizer_order) != expect {
            bad = Some(format!("type {}: {} vs {expect}", c.signed_type, c.centralizer_order));
            break;
        }
        count += 1;
    }
    reports.push(match bad {
        None => CheckReport::pass("centralizer = 2^{1+l} Z_rho", params.clone(), count),
        Some(w) => CheckReport::fail("centralizer = 2^{1+l} Z_rho", params.clone(), w, count),
    });
    reports.push(oracle_trace_check_with(b, n, &e));
    reports
}

/// Basic spin traces against `±2^{l(ρ)} ∏_c γ(c)^{l(ρ(c))}` on split even classes, zero elsewhere.
pub fn oracle_trace_check(b: &Builtin, n: usize) -> CheckReport {
    match enumerate_classes_bruteforce(b, n) {
        Ok(e) => oracle_trace_check_with(b, n, &e),
        Err(err) => CheckReport::fail("basic spin traces", json!({"gamma": b.data.name, "n": n}), err.to_string(), 0),
    }
}

fn oracle_trace_check_with(b: &Builtin, n: usize, e: &ClassEnumeration) -> CheckReport {
    let name = "basic spin trace = +-2^l prod gamma(c)^l, 0 off split even classes";
    let params = json!({"gamma": b.data.name, "n": n});
    let alg = SpinAlgebra::new(b.data.clone());
    let mut count = 0;
    for v in 0..b.group.reps.len() {
        let closed = alg.basic_char_closed(n, &b.data.basis(v));
        for c in &e.classes {
            let tr = match basic_spin_trace(b, v, &c.representative) {
                Ok(t) => t,
                Err(err) => return CheckReport::fail(name, params, err.to_string(), count),
            };
            let t = &c.signed_type;
            let expect = if c.is_split && t.parity() == 0 {
                let val = closed.get(&t.plus);
                if c.contains_canonical {
                    val
                } else {
                    -val
                }
            } else {
                CycScalar::zero()
            };
            if tr != expect {
                return CheckReport::fail(name, params, format!("V={v} class {t}: {tr} vs {expect}"), count);
            }
            count += 1;
        }
    }
    CheckReport::pass(name, params, count)
}

/// Rows of the character table supported on the trivial character, against
/// `2^{−⌊l/2⌋} Σ_φ c_φ Ind_{H_φ}(L_n)` computed by brute force, up to the sign of each row.
pub fn oracle_table_check(b: &Builtin, n: usize) -> CheckReport {
    let name = "table rows = brute-force induced traces up to row sign";
    let params = json!({"gamma": b.data.name, "n": n});
    let table = match build_table(&b.data, n, false) {
        Ok(t) => t,
        Err(err) => return CheckReport::fail(name, params, err.to_string(), 0),
    };
    let e = match enumerate_classes_bruteforce(b, n) {
        Ok(e) => e,
        Err(err) => return CheckReport::fail(name, params, err.to_string(), 0),
    };
    match compare_rows(b, &table, &e) {
        Ok(c) => CheckReport::pass(name, params, c),
        Err(w) => CheckReport::fail(name, params, w, 0),
    }
}

fn compare_rows(b: &Builtin, table: &CharTable, e: &ClassEnumeration) -> Result<u64, String> {
    let n = table.n;
    let index: HashMap<&SpinElement, usize> = e.elements.iter().enumerate().map(|(i, x)| (x, i)).collect();
    let total = e.elements.len() as i64;
    let col_classes: Vec<usize> = table
        .columns
        .iter()
        .map(|mu| e.class_of[index[&canonical_rep(b, mu)]])
        .collect();
    let mut induced: HashMap<Vec<i64>, Vec<Rational>> = HashMap::new();
    let mut count = 0;
    for row in &table.rows {
        if row.lambda.0.iter().skip(1).any(|p| !p.is_empty()) {
            continue;
        }
        let coeffs = raising_coefficients(row.lambda.get(0));
        let mut vals = vec![Rational::from_integer(0.into()); table.columns.len()];
        for (phi, c) in coeffs {
            let blocks: Vec<usize> = phi.iter().filter(|&&p| p > 0).map(|&p| p as usize).collect();
            let mut key = blocks.clone();
            key.sort_unstable();
            let ind = induced
                .entry(key.iter().map(|&x| x as i64).collect())
                .or_insert_with(|| induced_values(b, e, &key, &col_classes, total));
            for (v, x) in vals.iter_mut().zip(ind.iter()) {
                *v += x * Rational::from_integer(c.into());
            }
        }
        let scale = Rational::new(1.into(), BigInt::from(1) << (row.lambda.length() / 2));
        let expect: Vec<CycScalar> = vals.into_iter().map(|v| CycScalar::from_rational(v * &scale)).collect();
        let neg: Vec<CycScalar> = expect.iter().map(|v| -v).collect();
        if row.values != expect && row.values != neg {
            let ev: Vec<String> = expect.iter().map(|v| v.to_string()).collect();
            let rv: Vec<String> = row.values.iter().map(|v| v.to_string()).collect();
            return Err(format!("row {}: table [{}] vs oracle [{}]", row.lambda, rv.join(", "), ev.join(", ")));
        }
        count += 1;
    }
    let _ = n;
    Ok(count)
}

/// `Ind_H^G (L_n|_H)` at each column class, `H` the preimage of the block
/// stabilizer of the composition `blocks`.
fn induced_values(b: &Builtin, e: &ClassEnumeration, blocks: &[usize], col_classes: &[usize], total: i64) -> Vec<Rational> {
    let n: usize = blocks.iter().sum();
    let mut block_of = Vec::with_capacity(n);
    for (i, &len) in blocks.iter().enumerate() {
        block_of.extend(std::iter::repeat(i).take(len));
    }
    let in_h = |x: &SpinElement| (0..n).all(|i| block_of[x.s[i]] == block_of[i]);
    let h_size = e.elements.iter().filter(|x| in_h(x)).count() as i64;
    col_classes
        .iter()
        .map(|&cid| {
            let cls = &e.classes[cid];
            let meet = cls.members.iter().filter(|&&m| in_h(&e.elements[m])).count() as i64;
            let tr = basic_spin_trace(b, 0, &cls.representative).expect("trivial character is realizable");
            let tr = tr.as_rational().expect("trivial character traces are rational");
            tr * Rational::new((cls.centralizer_order as i64 * meet).into(), h_size.into())
        })
        .map(|r| {
            let _ = total;
            r
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gamma::builtin;

    #[test]
    fn heisenberg_small() {
        let b = builtin("cyclic:3").unwrap();
        let xi = b.data.mckay_xi(None).unwrap();
        let space = FockSpace::new(&b.data, &xi).unwrap();
        let r = heisenberg_check(&space, 3, 3);
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn transport_isometry_hopf_small() {
        let b = builtin("cyclic:3").unwrap();
        let alg = SpinAlgebra::new(b.data.clone());
        let xi = VirtualChar::standard(3);
        for r in [
            heisenberg_transport_check(&alg, &xi, 3),
            isometry_check(&alg, &b.data.mckay_xi(None).unwrap(), 3),
            hopf_product_check(&alg, 3),
            hopf_adjoint_check(&alg, 3),
        ] {
            assert!(r.passed(), "{r:?}");
        }
    }

    #[test]
    fn oracle_small() {
        let b = builtin("cyclic:2").unwrap();
        for r in oracle_class_checks(&b, 2) {
            assert!(r.passed(), "{r:?}");
        }
        let t = builtin("trivial").unwrap();
        let r = oracle_table_check(&t, 3);
        assert!(r.passed(), "{r:?}");
    }
}
