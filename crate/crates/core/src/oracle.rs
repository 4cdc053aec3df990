//! Concrete elements of the double cover `Γ̃Bₙ`, signed cycle types, and
//! brute-force conjugacy classes and traces for small `n`.
//!
//! Indices are 0-based internally; `a_i` for `i` in `0..n`.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use num_bigint::BigInt;

use crate::error::OracleError;
use crate::gamma::{Builtin, GammaData};
use crate::partitions::{enumerate, MultiPartition, Partition, PartitionKind};
use crate::scalars::CycScalar;

/// Upper bound on the group order for enumeration.
pub const ENUMERATION_GUARD: u128 = 1_000_000;

/// Reduces a product `a_{i_1} ⋯ a_{i_m}` to `z^k a_J` with `J` increasing.
///
/// Each swap of distinct neighbours and each cancellation `a_i a_i` costs one `z`.
/// The same routine gives Clifford products `e_I e_J` with `z = −1`.
pub fn normalize_word(seq: &[usize]) -> (u8, Vec<usize>) {
    let mut out: Vec<usize> = Vec::with_capacity(seq.len());
    let mut k = 0u8;
    for &i in seq {
        // `i` enters at the right end and moves left
        let mut pos = out.len();
        while pos > 0 && out[pos - 1] > i {
            pos -= 1;
            k ^= 1;
        }
        if pos > 0 && out[pos - 1] == i {
            out.remove(pos - 1);
            k ^= 1;
        } else {
            out.insert(pos, i);
        }
    }
    (k, out)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct PinWord {
    pub k: u8,
    pub idx: Vec<usize>,
}

impl PinWord {
    pub fn parity(&self) -> u8 {
        (self.idx.len() % 2) as u8
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpinElement {
    pub g: Vec<usize>,
    pub w: PinWord,
    /// `s[i]` is the image of `i`.
    pub s: Vec<usize>,
}

impl SpinElement {
    pub fn identity(n: usize) -> Self {
        SpinElement { g: vec![0; n], w: PinWord::default(), s: (0..n).collect() }
    }

    pub fn n(&self) -> usize {
        self.s.len()
    }

    pub fn parity(&self) -> u8 {
        self.w.parity()
    }

    /// Multiplies by the central element `z`.
    pub fn times_z(&self) -> Self {
        let mut x = self.clone();
        x.w.k ^= 1;
        x
    }

    pub fn a(n: usize, i: usize) -> Self {
        let mut x = Self::identity(n);
        x.w.idx = vec![i];
        x
    }

    pub fn perm(s: Vec<usize>) -> Self {
        let n = s.len();
        SpinElement { g: vec![0; n], w: PinWord::default(), s }
    }

    fn inv_perm(&self) -> Vec<usize> {
        let mut t = vec![0; self.n()];
        for (i, &j) in self.s.iter().enumerate() {
            t[j] = i;
        }
        t
    }
}

impl fmt::Display for SpinElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let idx: Vec<String> = self.w.idx.iter().map(|i| (i + 1).to_string()).collect();
        let s: Vec<String> = self.s.iter().map(|i| (i + 1).to_string()).collect();
        write!(f, "(g={:?}, z^{} a{{{}}}, s=[{}])", self.g, self.w.k, idx.join(","), s.join(" "))
    }
}

/// `(g, z^k a_I, s)(g', z^{k'} a_{I'}, s') = (g·s(g'), z^{k+k'} a_I a_{s(I')}, ss')`.
pub fn multiply(grp: &crate::gamma::ConcreteGroup, x: &SpinElement, y: &SpinElement) -> Result<SpinElement, OracleError> {
    let n = x.n();
    if y.n() != n {
        return Err(OracleError::SizeMismatch(n, y.n()));
    }
    let sinv = x.inv_perm();
    let g = (0..n).map(|i| grp.mul[x.g[i]][y.g[sinv[i]]]).collect();
    let mut seq = x.w.idx.clone();
    seq.extend(y.w.idx.iter().map(|&j| x.s[j]));
    let (k, idx) = normalize_word(&seq);
    let s = (0..n).map(|i| x.s[y.s[i]]).collect();
    Ok(SpinElement { g, w: PinWord { k: x.w.k ^ y.w.k ^ k, idx }, s })
}

pub fn inverse(grp: &crate::gamma::ConcreteGroup, x: &SpinElement) -> SpinElement {
    let n = x.n();
    let t = x.inv_perm();
    let g = (0..n).map(|j| grp.inv[x.g[x.s[j]]]).collect();
    let mut idx: Vec<usize> = x.w.idx.iter().map(|&i| t[i]).collect();
    idx.sort_unstable();
    let mut cand = SpinElement { g, w: PinWord { k: 0, idx }, s: t };
    let prod = multiply(grp, x, &cand).expect("same size");
    debug_assert!(prod.w.idx.is_empty());
    cand.w.k = prod.w.k;
    cand
}

pub fn conjugate(grp: &crate::gamma::ConcreteGroup, h: &SpinElement, hinv: &SpinElement, x: &SpinElement) -> SpinElement {
    let hx = multiply(grp, h, x).expect("same size");
    multiply(grp, &hx, hinv).expect("same size")
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedType {
    pub plus: MultiPartition,
    pub minus: MultiPartition,
}

impl SignedType {
    /// Parity of the class: `l(ρ⁻) mod 2`.
    pub fn parity(&self) -> u8 {
        (self.minus.length() % 2) as u8
    }

    pub fn is_split(&self) -> bool {
        let empty = |m: &MultiPartition| m.length() == 0;
        if self.parity() == 0 {
            empty(&self.minus) && self.plus.all_odd()
        } else {
            empty(&self.plus) && self.minus.is_strict()
        }
    }
}

impl fmt::Display for SignedType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(+{}, -{})", self.plus, self.minus)
    }
}

pub fn signed_type(b: &Builtin, x: &SpinElement) -> SignedType {
    let k = b.data.num_classes();
    let n = x.n();
    let mut plus: Vec<Vec<u32>> = vec![Vec::new(); k];
    let mut minus: Vec<Vec<u32>> = vec![Vec::new(); k];
    let mut seen = vec![false; n];
    let in_i: Vec<bool> = (0..n).map(|i| x.w.idx.contains(&i)).collect();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        // cycle j1 -> j2 = s(j1) -> ...; product g_{jm} ⋯ g_{j1}
        let mut j = start;
        let mut prod = b.group.identity();
        let mut len = 0u32;
        let mut hits = 0usize;
        while !seen[j] {
            seen[j] = true;
            prod = b.group.mul[x.g[j]][prod];
            len += 1;
            hits += in_i[j] as usize;
            j = x.s[j];
        }
        let c = b.group.class_of[prod];
        if hits % 2 == 0 {
            plus[c].push(len);
        } else {
            minus[c].push(len);
        }
    }
    SignedType {
        plus: MultiPartition(plus.into_iter().map(Partition::new).collect()),
        minus: MultiPartition(minus.into_iter().map(Partition::new).collect()),
    }
}

/// `(g, s)` with no `a`-factors whose type is `ρ⁺ = rho`: cycles on consecutive
/// positions, the class representative at each cycle's first position.
pub fn canonical_rep(b: &Builtin, rho: &MultiPartition) -> SpinElement {
    let n = rho.weight();
    let mut g = vec![0; n];
    let mut s: Vec<usize> = (0..n).collect();
    let mut pos = 0;
    for (c, p) in rho.0.iter().enumerate() {
        let rep = (0..b.group.order).find(|&x| b.group.class_of[x] == c).expect("nonempty class");
        for &len in p.parts() {
            let len = len as usize;
            g[pos] = rep;
            for t in 0..len {
                s[pos + t] = pos + (t + 1) % len;
            }
            pos += len;
        }
    }
    SpinElement { g, w: PinWord::default(), s }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

pub fn group_order(b: &Builtin, n: usize) -> u128 {
    let fact: u128 = (1..=n as u128).product();
    (1u128 << (n + 1)) * fact * (b.group.order as u128).pow(n as u32)
}

/// Every element of `Γ̃Bₙ`.
pub fn all_elements(b: &Builtin, n: usize) -> Result<Vec<SpinElement>, OracleError> {
    let ord = group_order(b, n);
    if ord > ENUMERATION_GUARD {
        return Err(OracleError::TooLarge(ord, ENUMERATION_GUARD));
    }
    let m = b.group.order;
    let perms = permutations(n);
    let mut out = Vec::with_capacity(ord as usize);
    for s in &perms {
        for mask in 0..(1usize << n) {
            let idx: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            for k in 0..2u8 {
                for code in 0..m.pow(n as u32) {
                    let mut g = vec![0; n];
                    let mut c = code;
                    for slot in g.iter_mut() {
                        *slot = c % m;
                        c /= m;
                    }
                    out.push(SpinElement { g, w: PinWord { k, idx: idx.clone() }, s: s.clone() });
                }
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct OracleClass {
    pub representative: SpinElement,
    pub size: usize,
    pub is_split: bool,
    pub signed_type: SignedType,
    pub centralizer_order: u128,
    /// True when the class contains the canonical `(g, s)` element of its type.
    pub contains_canonical: bool,
    /// True when every element of the class has the same signed type.
    pub type_constant: bool,
    pub members: Vec<usize>,
}

pub struct ClassEnumeration {
    pub elements: Vec<SpinElement>,
    pub class_of: Vec<usize>,
    pub classes: Vec<OracleClass>,
}

/// Conjugacy classes by orbit closure under conjugation by generators.
pub fn enumerate_classes_bruteforce(b: &Builtin, n: usize) -> Result<ClassEnumeration, OracleError> {
    let elements = all_elements(b, n)?;
    let index: HashMap<SpinElement, usize> = elements.iter().cloned().enumerate().map(|(i, x)| (x, i)).collect();
    let grp = &b.group;
    let mut gens = Vec::new();
    for i in 0..n {
        gens.push(SpinElement::a(n, i));
    }
    for i in 0..n.saturating_sub(1) {
        let mut s: Vec<usize> = (0..n).collect();
        s.swap(i, i + 1);
        gens.push(SpinElement::perm(s));
    }
    if n > 0 {
        for h in 1..grp.order {
            let mut x = SpinElement::identity(n);
            x.g[0] = h;
            gens.push(x);
        }
    }
    let gens: Vec<(SpinElement, SpinElement)> = gens.into_iter().map(|h| {
        let hi = inverse(grp, &h);
        (h, hi)
    }).collect();

    let total = elements.len();
    let mut class_of = vec![usize::MAX; total];
    let mut members_list: Vec<Vec<usize>> = Vec::new();
    for start in 0..total {
        if class_of[start] != usize::MAX {
            continue;
        }
        let cid = members_list.len();
        let mut members = vec![start];
        class_of[start] = cid;
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for (h, hi) in &gens {
                let y = conjugate(grp, h, hi, &elements[u]);
                let v = index[&y];
                if class_of[v] == usize::MAX {
                    class_of[v] = cid;
                    members.push(v);
                    queue.push_back(v);
                }
            }
        }
        members_list.push(members);
    }
    let ord = total as u128;
    let mut classes = Vec::with_capacity(members_list.len());
    for (cid, members) in members_list.into_iter().enumerate() {
        let rep = elements[members[0]].clone();
        let t = signed_type(b, &rep);
        let type_constant = members.iter().all(|&m| signed_type(b, &elements[m]) == t);
        let zrep = index[&rep.times_z()];
        let is_split = class_of[zrep] != cid;
        let contains_canonical = t.parity() == 0 && t.minus.length() == 0 && {
            let c = canonical_rep(b, &t.plus);
            class_of[index[&c]] == cid
        };
        classes.push(OracleClass {
            representative: rep,
            size: members.len(),
            is_split,
            signed_type: t,
            centralizer_order: ord / members.len() as u128,
            contains_canonical,
            type_constant,
            members,
        });
    }
    Ok(ClassEnumeration { elements, class_of, classes })
}

/// Trace of `(g, s)` on `V^{⊗n}` for the i-th irreducible of a built-in group.
fn tensor_trace(b: &Builtin, v: usize, x: &SpinElement) -> CycScalar {
    let mats: Vec<_> = x.g.iter().map(|&h| &b.group.reps[v][h]).collect();
    let d = b.group.reps[v][0].len();
    let n = x.n();
    let sinv = x.inv_perm();
    let mut acc = CycScalar::zero();
    let mut basis = vec![0usize; n];
    loop {
        let mut term = CycScalar::one();
        for i in 0..n {
            let e = &mats[i][basis[i]][basis[sinv[i]]];
            if e.is_zero() {
                term = CycScalar::zero();
                break;
            }
            term = &term * e;
        }
        acc = acc + term;
        // next basis tuple
        let mut i = 0;
        loop {
            if i == n {
                return acc;
            }
            basis[i] += 1;
            if basis[i] < d {
                break;
            }
            basis[i] = 0;
            i += 1;
        }
    }
}

/// Trace of `z^k a_J s` on the Clifford module `L_n` with basis `e_I`.
pub fn clifford_trace(x: &SpinElement) -> i64 {
    let n = x.n();
    let mut acc = 0i64;
    for mask in 0..(1usize << n) {
        let set: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let image: Vec<usize> = set.iter().map(|&i| x.s[i]).collect();
        let (k1, sorted) = normalize_word(&image);
        let mut seq = x.w.idx.clone();
        seq.extend_from_slice(&sorted);
        let (k2, res) = normalize_word(&seq);
        if res == set {
            let k = x.w.k ^ k1 ^ k2;
            acc += if k == 0 { 1 } else { -1 };
        }
    }
    acc
}

/// Trace of `x` on `V^{⊗n} ⊗ L_n`.
pub fn basic_spin_trace(b: &Builtin, v: usize, x: &SpinElement) -> Result<CycScalar, OracleError> {
    if v >= b.group.reps.len() {
        return Err(OracleError::NotRealizable(v));
    }
    let l = clifford_trace(x);
    if l == 0 {
        return Ok(CycScalar::zero());
    }
    Ok(tensor_trace(b, v, x).scale(&crate::scalars::rint(l)))
}

/// `2^{1+l(ρ)} Z_ρ`, the centralizer order of a split even class.
pub fn split_centralizer(b: &Builtin, rho: &MultiPartition) -> BigInt {
    rho.big_z(&b.data) * (BigInt::from(1) << (1 + rho.length()))
}

/// A signed cycle type with its predicted split status and class data in `Γ̃Bₙ`.
#[derive(Clone, Debug)]
pub struct TypeClass {
    pub signed_type: SignedType,
    pub split: bool,
    pub centralizer: BigInt,
    pub class_size: BigInt,
}

/// Every signed type of weight `n`, classified by the split-class theorem.
///
/// In the quotient the centralizer is `∏ m_i(c,±)! (2iζ_c)^{m_i(c,±)}`; a split
/// type lifts to two classes with twice that centralizer, a non-split type to one.
pub fn type_classes(g: &GammaData, n: usize) -> Vec<TypeClass> {
    let k = g.num_classes();
    let fact: BigInt = (1..=n).map(BigInt::from).product();
    let order = (BigInt::from(1) << (n + 1)) * fact * BigInt::from(g.order).pow(n as u32);
    let quotient_z = |m: &MultiPartition| -> BigInt {
        let mut z = BigInt::from(1);
        for (c, p) in m.0.iter().enumerate() {
            for (part, mult) in p.multiplicities() {
                let f: BigInt = (1..=mult).map(BigInt::from).product();
                z *= f * BigInt::from(2 * part as u64 * g.zeta_c(c)).pow(mult as u32);
            }
        }
        z
    };
    let mut out = Vec::new();
    for a in 0..=n {
        for plus in enumerate(PartitionKind::All, a, k) {
            for minus in enumerate(PartitionKind::All, n - a, k) {
                let t = SignedType { plus: plus.clone(), minus };
                let split = t.is_split();
                let z = quotient_z(&t.plus) * quotient_z(&t.minus);
                let centralizer = if split { z * 2 } else { z };
                let class_size = &order / &centralizer;
                out.push(TypeClass { signed_type: t, split, centralizer, class_size });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gamma::builtin;

    fn el(n: usize, idx: &[usize], s: &[usize]) -> SpinElement {
        SpinElement { g: vec![0; n], w: PinWord { k: 0, idx: idx.to_vec() }, s: s.to_vec() }
    }

    #[test]
    fn pin_relations() {
        let b = builtin("trivial").unwrap();
        let g = &b.group;
        let a1 = SpinElement::a(2, 0);
        let a2 = SpinElement::a(2, 1);
        let sq = multiply(g, &a1, &a1).unwrap();
        assert_eq!(sq, SpinElement::identity(2).times_z());
        let p = multiply(g, &a1, &a2).unwrap();
        let q = multiply(g, &a2, &a1).unwrap();
        assert_eq!(p.times_z(), q);
        // conjugate (12) by a_{1,2}(12)
        let x = el(2, &[], &[1, 0]);
        let h = el(2, &[0, 1], &[1, 0]);
        let y = conjugate(g, &h, &inverse(g, &h), &x);
        assert_eq!(y, x.times_z());
    }

    #[test]
    fn inverses_and_associativity() {
        let b = builtin("cyclic:2").unwrap();
        let elems = all_elements(&b, 2).unwrap();
        let e = SpinElement::identity(2);
        for x in elems.iter().step_by(3) {
            assert_eq!(multiply(&b.group, x, &inverse(&b.group, x)).unwrap(), e);
        }
        let a1 = SpinElement::a(1, 0);
        let ai = inverse(&b.group, &a1);
        assert_eq!(ai, a1.times_z());
        for x in elems.iter().step_by(5) {
            for y in elems.iter().step_by(7) {
                for z in elems.iter().step_by(11) {
                    let l = multiply(&b.group, &multiply(&b.group, x, y).unwrap(), z).unwrap();
                    let r = multiply(&b.group, x, &multiply(&b.group, y, z).unwrap()).unwrap();
                    assert_eq!(l, r);
                }
            }
        }
    }

    #[test]
    fn signed_type_examples() {
        let t = builtin("trivial").unwrap();
        let x = el(3, &[0], &[1, 2, 0]);
        let st = signed_type(&t, &x);
        assert_eq!(st.plus.length(), 0);
        assert_eq!(st.minus, MultiPartition(vec![Partition(vec![3])]));
        let id = signed_type(&t, &SpinElement::identity(3));
        assert_eq!(id.plus, MultiPartition(vec![Partition(vec![1, 1, 1])]));
        let c2 = builtin("cyclic:2").unwrap();
        let y = SpinElement { g: vec![1, 0], w: PinWord::default(), s: vec![1, 0] };
        let st = signed_type(&c2, &y);
        assert_eq!(st.plus, MultiPartition(vec![Partition::empty(), Partition(vec![2])]));
    }

    #[test]
    fn split_rule_examples() {
        let mk = |p: &[u32], m: &[u32]| SignedType {
            plus: MultiPartition(vec![Partition(p.to_vec())]),
            minus: MultiPartition(vec![Partition(m.to_vec())]),
        };
        assert!(mk(&[1, 1, 1], &[]).is_split());
        assert!(!mk(&[2, 1], &[]).is_split());
        assert!(mk(&[], &[3]).is_split());
        assert!(!mk(&[], &[2, 1]).is_split());
        assert!(!mk(&[1], &[2]).is_split());
    }

    #[test]
    fn small_class_counts() {
        let t = builtin("trivial").unwrap();
        for (n, even, odd) in [(2, 1, 1), (3, 2, 1)] {
            let e = enumerate_classes_bruteforce(&t, n).unwrap();
            let even_split = e.classes.iter().filter(|c| c.is_split && c.signed_type.parity() == 0).count();
            let odd_split = e.classes.iter().filter(|c| c.is_split && c.signed_type.parity() == 1).count();
            assert_eq!(even_split, 2 * even);
            assert_eq!(odd_split, 2 * odd);
        }
        let e = enumerate_classes_bruteforce(&t, 2).unwrap();
        let id_class = &e.classes[e.class_of[0]];
        assert_eq!(id_class.centralizer_order, 16);
    }

    #[test]
    fn clifford_traces() {
        let t = builtin("trivial").unwrap();
        assert_eq!(basic_spin_trace(&t, 0, &SpinElement::identity(3)).unwrap(), CycScalar::from_int(8));
        for rho in enumerate(PartitionKind::Odd, 3, 1) {
            let x = canonical_rep(&t, &rho);
            let v = basic_spin_trace(&t, 0, &x).unwrap();
            assert_eq!(v, CycScalar::from_int(1 << rho.length()));
        }
        let q = builtin("quaternion8").unwrap();
        assert_eq!(basic_spin_trace(&q, 4, &SpinElement::identity(2)).unwrap(), CycScalar::from_int(16));
    }

    #[test]
    fn guard() {
        let q = builtin("quaternion8").unwrap();
        assert!(matches!(all_elements(&q, 4), Err(OracleError::TooLarge(_, _))));
        assert_eq!(group_order(&builtin("cyclic:2").unwrap(), 3), 768);
    }

    #[test]
    fn type_classes_match_enumeration() {
        for (name, n) in [("trivial", 3), ("cyclic:2", 2), ("cyclic:3", 2)] {
            let b = builtin(name).unwrap();
            let types = type_classes(&b.data, n);
            let total: BigInt = types.iter().map(|t| &t.class_size * if t.split { 2 } else { 1 }).sum();
            assert_eq!(total, BigInt::from(group_order(&b, n)));
            let e = enumerate_classes_bruteforce(&b, n).unwrap();
            for c in &e.classes {
                let t = types.iter().find(|t| t.signed_type == c.signed_type).unwrap();
                assert_eq!(t.split, c.is_split, "{name} {}", c.signed_type);
                assert_eq!(t.centralizer, BigInt::from(c.centralizer_order), "{name} {}", c.signed_type);
            }
        }
    }
}
