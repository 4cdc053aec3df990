//! Partitions and partition-valued functions on a finite index set.

use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use serde_json::{Map, Value};

use crate::gamma::GammaData;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Partition(pub Vec<u32>);

impl Partition {
    pub fn new(mut parts: Vec<u32>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn weight(&self) -> usize {
        self.0.iter().map(|&p| p as usize).sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_strict(&self) -> bool {
        self.0.windows(2).all(|w| w[0] > w[1])
    }

    pub fn all_odd(&self) -> bool {
        self.0.iter().all(|p| p % 2 == 1)
    }

    /// Multiplicities `(part, m_part)` in decreasing part order.
    pub fn multiplicities(&self) -> Vec<(u32, usize)> {
        let mut out: Vec<(u32, usize)> = Vec::new();
        for &p in &self.0 {
            match out.last_mut() {
                Some((q, m)) if *q == p => *m += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    /// `z_λ = ∏ m_i! i^{m_i}`.
    pub fn z(&self) -> BigInt {
        let mut acc = BigInt::one();
        for (p, m) in self.multiplicities() {
            for k in 1..=m {
                acc *= BigInt::from(k) * BigInt::from(p);
            }
        }
        acc
    }

    /// Dominance order between partitions of equal weight.
    pub fn dominates(&self, other: &Partition) -> bool {
        if self.weight() != other.weight() {
            return false;
        }
        let (mut a, mut b) = (0usize, 0usize);
        for i in 0..self.len().max(other.len()) {
            a += self.0.get(i).copied().unwrap_or(0) as usize;
            b += other.0.get(i).copied().unwrap_or(0) as usize;
            if a < b {
                return false;
            }
        }
        true
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PartitionKind {
    /// All partitions.
    All,
    /// All parts odd.
    Odd,
    /// Each partition strict.
    Strict,
    /// Strict with even total length.
    StrictEven,
    /// Strict with odd total length.
    StrictOdd,
}

/// Partitions of `w` in reverse-lexicographic order.
pub fn partitions_of(w: usize, kind: PartitionKind) -> Vec<Partition> {
    fn rec(rem: usize, max: usize, kind: PartitionKind, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if rem == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        for p in (1..=max.min(rem)).rev() {
            if kind == PartitionKind::Odd && p % 2 == 0 {
                continue;
            }
            cur.push(p as u32);
            let next_max = match kind {
                PartitionKind::Strict | PartitionKind::StrictEven | PartitionKind::StrictOdd => p - 1,
                _ => p,
            };
            rec(rem - p, next_max, kind, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(w, w, kind, &mut Vec::new(), &mut out);
    out
}

/// A partition for each index; the vector length is the size of the index set.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiPartition(pub Vec<Partition>);

impl MultiPartition {
    pub fn empty(k: usize) -> Self {
        MultiPartition(vec![Partition::empty(); k])
    }

    /// A single nonempty entry at `index`.
    pub fn single(k: usize, index: usize, p: Partition) -> Self {
        let mut m = Self::empty(k);
        m.0[index] = p;
        m
    }

    pub fn size(&self) -> usize {
        self.0.len()
    }

    pub fn get(&self, i: usize) -> &Partition {
        &self.0[i]
    }

    pub fn weight(&self) -> usize {
        self.0.iter().map(|p| p.weight()).sum()
    }

    pub fn length(&self) -> usize {
        self.0.iter().map(|p| p.len()).sum()
    }

    pub fn is_strict(&self) -> bool {
        self.0.iter().all(|p| p.is_strict())
    }

    pub fn all_odd(&self) -> bool {
        self.0.iter().all(|p| p.all_odd())
    }

    /// `(1ⁿ)` at index 0.
    pub fn identity_type(k: usize, n: usize) -> Self {
        Self::single(k, 0, Partition(vec![1; n]))
    }

    /// Disjoint union of parts index by index.
    pub fn union(&self, other: &MultiPartition) -> MultiPartition {
        MultiPartition(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| {
                    let mut v = a.0.clone();
                    v.extend_from_slice(&b.0);
                    Partition::new(v)
                })
                .collect(),
        )
    }

    /// `Z_ρ = ∏ m_i(c)! i^{m_i(c)} ζ_c^{l(ρ(c))}`.
    pub fn big_z(&self, g: &GammaData) -> BigInt {
        let mut acc = BigInt::one();
        for (c, p) in self.0.iter().enumerate() {
            acc *= p.z();
            acc *= BigInt::from(g.zeta_c(c)).pow(p.len() as u32);
        }
        acc
    }

    /// `ρ̄(c) = ρ(c⁻¹)`.
    pub fn bar(&self, g: &GammaData) -> MultiPartition {
        let mut out = Self::empty(self.size());
        for (c, p) in self.0.iter().enumerate() {
            out.0[g.inverse(c)] = p.clone();
        }
        out
    }

    /// `(‖ρ‖ − l(ρ)) mod 2`.
    pub fn d_parity(&self) -> u8 {
        ((self.weight() + self.length()) % 2) as u8
    }

    pub fn dominance(&self, other: &MultiPartition) -> Dominance {
        if self == other {
            return Dominance::Equal;
        }
        let above = self.0.iter().zip(&other.0).all(|(a, b)| a.dominates(b));
        let below = self.0.iter().zip(&other.0).all(|(a, b)| b.dominates(a));
        match (above, below) {
            (true, _) => Dominance::StrictlyAbove,
            (_, true) => Dominance::StrictlyBelow,
            _ => Dominance::Incomparable,
        }
    }

    /// Map from index name to parts, omitting empty entries.
    pub fn to_doc(&self, names: &[String]) -> Value {
        let mut m = Map::new();
        for (i, p) in self.0.iter().enumerate() {
            if !p.is_empty() {
                m.insert(names[i].clone(), Value::from(p.0.clone()));
            }
        }
        Value::Object(m)
    }

    pub fn from_doc(doc: &Value, names: &[String]) -> Option<MultiPartition> {
        let obj = doc.as_object()?;
        let mut out = Self::empty(names.len());
        for (k, v) in obj {
            let i = names.iter().position(|n| n == k)?;
            let parts: Vec<u32> = v.as_array()?.iter().map(|x| x.as_u64().map(|y| y as u32)).collect::<Option<_>>()?;
            out.0[i] = Partition::new(parts);
        }
        Some(out)
    }

    pub fn display_with(&self, names: &[String]) -> String {
        let items: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.is_empty())
            .map(|(i, p)| format!("{}:{}", names[i], p))
            .collect();
        if items.is_empty() {
            "∅".into()
        } else {
            items.join(" ")
        }
    }
}

impl fmt::Display for MultiPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", s.join("|"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dominance {
    Equal,
    StrictlyAbove,
    StrictlyBelow,
    Incomparable,
}

impl Dominance {
    /// `ρ ≥ π`, equality included.
    pub fn geq(self) -> bool {
        matches!(self, Dominance::Equal | Dominance::StrictlyAbove)
    }

    /// `ρ ≫ π`.
    pub fn strictly_above(self) -> bool {
        self == Dominance::StrictlyAbove
    }
}

/// Weight distributions of `n` over `k` slots, first slot heaviest first.
fn distributions(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return if n == 0 { vec![vec![]] } else { vec![] };
    }
    if k == 1 {
        return vec![vec![n]];
    }
    let mut out = Vec::new();
    for first in (0..=n).rev() {
        for mut rest in distributions(n - first, k - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// All multipartitions of total weight `n` over `k` indices of the given kind,
/// in a fixed order: weight distributions first, then reverse-lex per index.
pub fn enumerate(kind: PartitionKind, n: usize, k: usize) -> Vec<MultiPartition> {
    let base = match kind {
        PartitionKind::StrictEven | PartitionKind::StrictOdd => PartitionKind::Strict,
        other => other,
    };
    let mut cache: Vec<Vec<Partition>> = Vec::new();
    for w in 0..=n {
        cache.push(partitions_of(w, base));
    }
    let mut out = Vec::new();
    for dist in distributions(n, k) {
        let mut acc: Vec<Vec<Partition>> = vec![Vec::new()];
        for &w in &dist {
            let mut next = Vec::with_capacity(acc.len() * cache[w].len());
            for prefix in &acc {
                for p in &cache[w] {
                    let mut v = prefix.clone();
                    v.push(p.clone());
                    next.push(v);
                }
            }
            acc = next;
        }
        for v in acc {
            let m = MultiPartition(v);
            let keep = match kind {
                PartitionKind::StrictEven => m.length() % 2 == 0,
                PartitionKind::StrictOdd => m.length() % 2 == 1,
                _ => true,
            };
            if keep {
                out.push(m);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gamma::builtin;

    fn p(v: &[u32]) -> Partition {
        Partition(v.to_vec())
    }

    #[test]
    fn enumeration_examples() {
        let op = enumerate(PartitionKind::Odd, 3, 1);
        assert_eq!(op, vec![MultiPartition(vec![p(&[3])]), MultiPartition(vec![p(&[1, 1, 1])])]);
        let sp = enumerate(PartitionKind::Strict, 3, 1);
        assert_eq!(sp, vec![MultiPartition(vec![p(&[3])]), MultiPartition(vec![p(&[2, 1])])]);
        let spm = enumerate(PartitionKind::StrictOdd, 2, 1);
        assert_eq!(spm, vec![MultiPartition(vec![p(&[2])])]);
        assert_eq!(enumerate(PartitionKind::All, 0, 3), vec![MultiPartition::empty(3)]);
    }

    #[test]
    fn big_z_examples() {
        let triv = builtin("trivial").unwrap().data;
        assert_eq!(MultiPartition(vec![p(&[1, 1])]).big_z(&triv), BigInt::from(2));
        assert_eq!(MultiPartition(vec![p(&[3])]).big_z(&triv), BigInt::from(3));
        let c2 = builtin("cyclic:2").unwrap().data;
        assert_eq!(MultiPartition(vec![p(&[1, 1]), p(&[3])]).big_z(&c2), BigInt::from(48));
    }

    #[test]
    fn bar_examples() {
        let c3 = builtin("cyclic:3").unwrap().data;
        let rho = MultiPartition(vec![p(&[]), p(&[1]), p(&[])]);
        assert_eq!(rho.bar(&c3), MultiPartition(vec![p(&[]), p(&[]), p(&[1])]));
        assert_eq!(rho.bar(&c3).bar(&c3), rho);
        let c2 = builtin("cyclic:2").unwrap().data;
        let r2 = MultiPartition(vec![p(&[2]), p(&[1])]);
        assert_eq!(r2.bar(&c2), r2);
    }

    #[test]
    fn parity_and_dominance() {
        assert_eq!(MultiPartition(vec![p(&[1, 1, 1])]).d_parity(), 0);
        assert_eq!(MultiPartition(vec![p(&[2])]).d_parity(), 1);
        let a = MultiPartition(vec![p(&[3])]);
        let b = MultiPartition(vec![p(&[2, 1])]);
        assert_eq!(a.dominance(&b), Dominance::StrictlyAbove);
        let c = MultiPartition(vec![p(&[2, 2])]);
        let d = MultiPartition(vec![p(&[3, 1])]);
        assert_eq!(d.dominance(&c), Dominance::StrictlyAbove);
        assert_eq!(c.dominance(&d), Dominance::StrictlyBelow);
        assert!(a.dominance(&a).geq() && !a.dominance(&a).strictly_above());
        let e = MultiPartition(vec![p(&[3, 3])]);
        let f = MultiPartition(vec![p(&[4, 1, 1])]);
        assert_eq!(e.dominance(&f), Dominance::Incomparable);
    }

    #[test]
    fn doc_round_trip() {
        let names: Vec<String> = vec!["c0".into(), "c1".into()];
        let m = MultiPartition(vec![p(&[]), p(&[3, 1])]);
        let d = m.to_doc(&names);
        assert_eq!(d.to_string(), r#"{"c1":[3,1]}"#);
        assert_eq!(MultiPartition::from_doc(&d, &names), Some(m));
    }
}
