//! Finite groups at character-table level, built-in groups with concrete
//! multiplication, and the weighted forms on the representation ring.

use std::fmt;

use num_integer::Integer;
use petgraph::graph::UnGraph;
use serde::{Deserialize, Serialize};

use crate::error::GammaError;
use crate::scalars::{rat, CycScalar};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassInfo {
    pub name: String,
    pub size: u64,
    pub element_order: u32,
    pub inverse: usize,
}

#[derive(Clone, Debug)]
pub struct GammaData {
    pub name: String,
    pub order: u64,
    pub classes: Vec<ClassInfo>,
    /// `chars[i][c]` is the value of the i-th irreducible character on class c.
    pub chars: Vec<Vec<CycScalar>>,
    pub exponent: u32,
    pub char_names: Vec<String>,
    /// Index vector of the natural two-dimensional character, when known.
    pub natural_rep: Option<Vec<i64>>,
}

impl PartialEq for GammaData {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.order == other.order
            && self.classes == other.classes
            && self.chars == other.chars
            && self.exponent == other.exponent
    }
}

impl GammaData {
    /// Validates and stores the table, promoting every value to the exponent.
    pub fn new(
        name: impl Into<String>,
        order: u64,
        classes: Vec<ClassInfo>,
        chars: Vec<Vec<CycScalar>>,
    ) -> Result<Self, GammaError> {
        let k = classes.len();
        if k == 0 {
            return Err(GammaError::Schema("no classes".into()));
        }
        if chars.len() != k || chars.iter().any(|r| r.len() != k) {
            return Err(GammaError::NotSquare {
                rows: chars.len(),
                cols: chars.first().map_or(0, |r| r.len()),
            });
        }
        let sum: u64 = classes.iter().map(|c| c.size).sum();
        if sum != order {
            return Err(GammaError::SizeSum { sum, order });
        }
        for c in &classes {
            if c.size == 0 || order % c.size != 0 {
                return Err(GammaError::NonIntegerCentralizer(c.name.clone()));
            }
            if c.element_order == 0 {
                return Err(GammaError::Schema(format!("class {} has element order 0", c.name)));
            }
        }
        if classes[0].size != 1 || classes[0].inverse != 0 {
            return Err(GammaError::BadInverse);
        }
        for (i, c) in classes.iter().enumerate() {
            if c.inverse >= k || classes[c.inverse].inverse != i {
                return Err(GammaError::BadInverse);
            }
        }
        let exponent = classes.iter().fold(1u32, |acc, c| acc.lcm(&c.element_order));
        let mut promoted = Vec::with_capacity(k);
        for row in &chars {
            let mut out = Vec::with_capacity(k);
            for v in row {
                if exponent % v.order() != 0 {
                    return Err(GammaError::ValueOrder(v.order(), exponent));
                }
                if v.is_rational() {
                    out.push(v.clone());
                } else {
                    out.push(v.promote(exponent)?);
                }
            }
            promoted.push(out);
        }
        if promoted[0].iter().any(|v| !v.is_one()) {
            return Err(GammaError::TrivialCharacter);
        }
        let g = GammaData {
            name: name.into(),
            order,
            classes,
            chars: promoted,
            exponent,
            char_names: (0..k).map(|i| format!("g{i}")).collect(),
            natural_rep: None,
        };
        g.check_orthogonality()?;
        Ok(g)
    }

    fn check_orthogonality(&self) -> Result<(), GammaError> {
        let k = self.num_classes();
        for i in 0..k {
            for j in i..k {
                let v = self.standard_form_rows(i, j);
                let expect = if i == j { CycScalar::one() } else { CycScalar::zero() };
                if v != expect {
                    return Err(GammaError::Orthogonality(i, j));
                }
            }
        }
        for c in 0..k {
            for d in 0..k {
                let mut acc = CycScalar::zero();
                for row in &self.chars {
                    acc = acc + &row[c] * &row[self.classes[d].inverse];
                }
                let expect = if c == d { CycScalar::from_int(self.zeta_c(c) as i64) } else { CycScalar::zero() };
                if acc != expect {
                    return Err(GammaError::ColumnOrthogonality(c, d));
                }
            }
        }
        Ok(())
    }

    fn standard_form_rows(&self, i: usize, j: usize) -> CycScalar {
        let mut acc = CycScalar::zero();
        for (c, info) in self.classes.iter().enumerate() {
            let t = &self.chars[i][c] * &self.chars[j][info.inverse];
            acc = acc + t.scale(&rat(info.size as i64, self.order as i64));
        }
        acc
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    /// Centralizer order ζ_c = |Γ| / |c|.
    pub fn zeta_c(&self, c: usize) -> u64 {
        self.order / self.classes[c].size
    }

    pub fn inverse(&self, c: usize) -> usize {
        self.classes[c].inverse
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.chars[i][0].to_i64().expect("character degree is an integer")
    }

    pub fn class_index(&self, name: &str) -> Option<usize> {
        self.classes.iter().position(|c| c.name == name)
    }

    pub fn char_index(&self, name: &str) -> Option<usize> {
        self.char_names.iter().position(|c| c == name)
    }

    /// Values on classes of the combination `Σ f_i γ_i`.
    pub fn class_values(&self, f: &[CycScalar]) -> Vec<CycScalar> {
        let k = self.num_classes();
        (0..k)
            .map(|c| {
                let mut acc = CycScalar::zero();
                for (i, fi) in f.iter().enumerate() {
                    if !fi.is_zero() {
                        acc = acc + fi * &self.chars[i][c];
                    }
                }
                acc
            })
            .collect()
    }

    /// Basis vector for γ_i as a character vector.
    pub fn basis(&self, i: usize) -> Vec<CycScalar> {
        let mut v = vec![CycScalar::zero(); self.num_classes()];
        v[i] = CycScalar::one();
        v
    }

    /// Character vector of the dual character γ̄_i.
    pub fn dual_index(&self, i: usize) -> usize {
        let k = self.num_classes();
        (0..k)
            .find(|&j| (0..k).all(|c| self.chars[j][c] == self.chars[i][self.inverse(c)]))
            .expect("dual of an irreducible character is irreducible")
    }

    /// `Σ_c ζ_c^{-1} ξ(c) f(c) g(c^{-1})`.
    pub fn weighted_form(&self, xi: &VirtualChar, f: &[CycScalar], g: &[CycScalar]) -> CycScalar {
        let xv = xi.values(self);
        let fv = self.class_values(f);
        let gv = self.class_values(g);
        let mut acc = CycScalar::zero();
        for c in 0..self.num_classes() {
            let t = &(&xv[c] * &fv[c]) * &gv[self.inverse(c)];
            acc = acc + t.scale(&rat(1, self.zeta_c(c) as i64));
        }
        acc
    }

    pub fn gram(&self, xi: &VirtualChar) -> Vec<Vec<CycScalar>> {
        let k = self.num_classes();
        (0..k)
            .map(|i| (0..k).map(|j| self.weighted_form(xi, &self.basis(i), &self.basis(j))).collect())
            .collect()
    }

    /// Integer matrix `⟨γ_i, γ_j⟩_ξ`.
    pub fn cartan_matrix(&self, xi: &VirtualChar) -> Result<Vec<Vec<i64>>, GammaError> {
        let g = self.gram(xi);
        let mut out = vec![vec![0i64; g.len()]; g.len()];
        for (i, row) in g.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                out[i][j] = v.to_i64().ok_or(GammaError::NonIntegerForm(i, j))?;
            }
        }
        Ok(out)
    }

    /// `2γ₀ − π` for the natural two-dimensional character π.
    ///
    /// `pi` designates π as an irreducible index; otherwise the built-in
    /// natural representation is used.
    pub fn mckay_xi(&self, pi: Option<usize>) -> Result<VirtualChar, GammaError> {
        let k = self.num_classes();
        let mut coeffs = vec![0i64; k];
        coeffs[0] = 2;
        match (pi, &self.natural_rep) {
            (Some(i), _) => {
                if i >= k {
                    return Err(GammaError::Length(i, k));
                }
                coeffs[i] -= 1;
            }
            (None, Some(v)) => {
                for (c, x) in coeffs.iter_mut().zip(v) {
                    *c -= x;
                }
            }
            (None, None) => return Err(GammaError::NoNaturalRep(self.name.clone())),
        }
        Ok(VirtualChar { coeffs })
    }

    pub fn to_document(&self) -> GammaDoc {
        GammaDoc {
            name: self.name.clone(),
            order: self.order,
            classes: self
                .classes
                .iter()
                .map(|c| ClassDoc {
                    name: c.name.clone(),
                    size: c.size,
                    element_order: c.element_order,
                    inverse: InverseRef::Index(c.inverse),
                })
                .collect(),
            chars: self.chars.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InverseRef {
    Index(usize),
    Name(String),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassDoc {
    pub name: String,
    pub size: u64,
    pub element_order: u32,
    pub inverse: InverseRef,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GammaDoc {
    pub name: String,
    pub order: u64,
    pub classes: Vec<ClassDoc>,
    pub chars: Vec<Vec<CycScalar>>,
}

/// Parses and validates a group document.
pub fn load_gamma(document: &[u8]) -> Result<GammaData, GammaError> {
    let doc: GammaDoc = serde_json::from_slice(document).map_err(|e| GammaError::Schema(e.to_string()))?;
    let mut classes = Vec::with_capacity(doc.classes.len());
    for c in &doc.classes {
        let inverse = match &c.inverse {
            InverseRef::Index(i) => *i,
            InverseRef::Name(n) => doc
                .classes
                .iter()
                .position(|d| &d.name == n)
                .ok_or_else(|| GammaError::Schema(format!("unknown inverse class {n:?}")))?,
        };
        classes.push(ClassInfo { name: c.name.clone(), size: c.size, element_order: c.element_order, inverse });
    }
    GammaData::new(doc.name, doc.order, classes, doc.chars)
}

/// Integer combination `Σ s_i γ_i` of irreducible characters.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VirtualChar {
    pub coeffs: Vec<i64>,
}

impl VirtualChar {
    pub fn standard(k: usize) -> Self {
        let mut coeffs = vec![0; k];
        coeffs[0] = 1;
        VirtualChar { coeffs }
    }

    pub fn as_char_vector(&self) -> Vec<CycScalar> {
        self.coeffs.iter().map(|&c| CycScalar::from_int(c)).collect()
    }

    pub fn values(&self, g: &GammaData) -> Vec<CycScalar> {
        g.class_values(&self.as_char_vector())
    }

    pub fn is_self_dual(&self, g: &GammaData) -> bool {
        let v = self.values(g);
        (0..g.num_classes()).all(|c| v[c] == v[g.inverse(c)])
    }

    pub fn is_genuine(&self) -> bool {
        self.coeffs.iter().all(|&c| c >= 0)
    }
}

type Matrix = Vec<Vec<CycScalar>>;

/// Multiplication table for the oracle, plus explicit matrices for each
/// irreducible character.
#[derive(Clone, Debug)]
pub struct ConcreteGroup {
    pub order: usize,
    pub mul: Vec<Vec<usize>>,
    pub inv: Vec<usize>,
    pub class_of: Vec<usize>,
    /// `reps[i][x]` is the matrix of element x in the i-th irreducible.
    pub reps: Vec<Vec<Matrix>>,
}

impl ConcreteGroup {
    pub fn identity(&self) -> usize {
        0
    }

    /// Conjugacy classes by orbit computation, as sorted element lists.
    pub fn conjugacy_orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.order];
        let mut out = Vec::new();
        for x in 0..self.order {
            if seen[x] {
                continue;
            }
            let mut orbit: Vec<usize> = (0..self.order).map(|h| self.mul[self.mul[h][x]][self.inv[h]]).collect();
            orbit.sort_unstable();
            orbit.dedup();
            for &y in &orbit {
                seen[y] = true;
            }
            out.push(orbit);
        }
        out
    }

    pub fn element_order(&self, x: usize) -> u32 {
        let mut y = x;
        let mut k = 1;
        while y != 0 {
            y = self.mul[y][x];
            k += 1;
        }
        k
    }

    pub fn trace(&self, i: usize, x: usize) -> CycScalar {
        let m = &self.reps[i][x];
        m.iter().enumerate().fold(CycScalar::zero(), |acc, (d, row)| acc + &row[d])
    }
}

#[derive(Clone, Debug)]
pub struct Builtin {
    pub data: GammaData,
    pub group: ConcreteGroup,
}

fn scalar_matrix(v: CycScalar) -> Matrix {
    vec![vec![v]]
}

fn cyclic(k: u32, name: String) -> Builtin {
    let ku = k as usize;
    let classes = (0..ku)
        .map(|m| ClassInfo {
            name: format!("c{m}"),
            size: 1,
            element_order: (k / (m as u32).gcd(&k)).max(1),
            inverse: (ku - m) % ku,
        })
        .collect();
    let chars: Vec<Vec<CycScalar>> = (0..ku)
        .map(|j| (0..ku).map(|m| CycScalar::zeta(k, (j * m) as i64)).collect())
        .collect();
    let mut data = GammaData::new(name, k as u64, classes, chars.clone()).expect("cyclic table is valid");
    if k >= 3 {
        let mut nat = vec![0i64; ku];
        nat[1] += 1;
        nat[ku - 1] += 1;
        data.natural_rep = Some(nat);
    } else if k == 2 {
        data.natural_rep = Some(vec![0, 2]);
    }
    let group = ConcreteGroup {
        order: ku,
        mul: (0..ku).map(|a| (0..ku).map(|b| (a + b) % ku).collect()).collect(),
        inv: (0..ku).map(|a| (ku - a) % ku).collect(),
        class_of: (0..ku).collect(),
        reps: chars.iter().map(|row| row.iter().map(|v| scalar_matrix(v.clone())).collect()).collect(),
    };
    Builtin { data, group }
}

fn klein4() -> Builtin {
    let names = ["1", "a", "b", "ab"];
    let classes = (0..4)
        .map(|m| ClassInfo { name: names[m].into(), size: 1, element_order: if m == 0 { 1 } else { 2 }, inverse: m })
        .collect();
    // characters indexed by bit masks: γ_j(x) = (-1)^{popcount(j & x)}
    let chars: Vec<Vec<CycScalar>> = (0..4usize)
        .map(|j| (0..4usize).map(|x| CycScalar::from_int(if (j & x).count_ones() % 2 == 0 { 1 } else { -1 })).collect())
        .collect();
    let data = GammaData::new("klein4", 4, classes, chars.clone()).expect("klein4 table is valid");
    let group = ConcreteGroup {
        order: 4,
        mul: (0..4).map(|a| (0..4).map(|b| a ^ b).collect()).collect(),
        inv: (0..4).collect(),
        class_of: (0..4).collect(),
        reps: chars.iter().map(|row| row.iter().map(|v| scalar_matrix(v.clone())).collect()).collect(),
    };
    Builtin { data, group }
}

/// Quaternion units: element `2u + s` is `(-1)^s · u` with `u ∈ {1, i, j, k}`.
fn quaternion_mul(a: usize, b: usize) -> usize {
    let (ua, sa) = (a / 2, a % 2);
    let (ub, sb) = (b / 2, b % 2);
    // table of unit products: (unit, sign)
    const T: [[(usize, usize); 4]; 4] = [
        [(0, 0), (1, 0), (2, 0), (3, 0)],
        [(1, 0), (0, 1), (3, 0), (2, 1)],
        [(2, 0), (3, 1), (0, 1), (1, 0)],
        [(3, 0), (2, 0), (1, 1), (0, 1)],
    ];
    let (u, s) = T[ua][ub];
    2 * u + (s + sa + sb) % 2
}

fn quaternion8() -> Builtin {
    let classes = vec![
        ClassInfo { name: "1".into(), size: 1, element_order: 1, inverse: 0 },
        ClassInfo { name: "-1".into(), size: 1, element_order: 2, inverse: 1 },
        ClassInfo { name: "i".into(), size: 2, element_order: 4, inverse: 2 },
        ClassInfo { name: "j".into(), size: 2, element_order: 4, inverse: 3 },
        ClassInfo { name: "k".into(), size: 2, element_order: 4, inverse: 4 },
    ];
    let rows: [[i64; 5]; 5] = [
        [1, 1, 1, 1, 1],
        [1, 1, 1, -1, -1],
        [1, 1, -1, 1, -1],
        [1, 1, -1, -1, 1],
        [2, -2, 0, 0, 0],
    ];
    let chars: Vec<Vec<CycScalar>> = rows.iter().map(|r| r.iter().map(|&v| CycScalar::from_int(v)).collect()).collect();
    let mut data = GammaData::new("quaternion8", 8, classes, chars.clone()).expect("Q8 table is valid");
    data.natural_rep = Some(vec![0, 0, 0, 0, 1]);
    let mul: Vec<Vec<usize>> = (0..8).map(|a| (0..8).map(|b| quaternion_mul(a, b)).collect()).collect();
    let inv: Vec<usize> = (0..8).map(|a| (0..8).find(|&b| mul[a][b] == 0).unwrap()).collect();
    let class_of: Vec<usize> = (0..8).map(|x| if x < 2 { x } else { x / 2 + 1 }).collect();
    let i = CycScalar::zeta(4, 1);
    let z = CycScalar::zero();
    let one = CycScalar::one();
    let unit_mats: [Matrix; 4] = [
        vec![vec![one.clone(), z.clone()], vec![z.clone(), one.clone()]],
        vec![vec![i.clone(), z.clone()], vec![z.clone(), -&i]],
        vec![vec![z.clone(), one.clone()], vec![-&one, z.clone()]],
        vec![vec![z.clone(), i.clone()], vec![i.clone(), z.clone()]],
    ];
    let two_dim: Vec<Matrix> = (0..8)
        .map(|x| {
            let m = &unit_mats[x / 2];
            if x % 2 == 0 {
                m.clone()
            } else {
                m.iter().map(|r| r.iter().map(|v| -v).collect()).collect()
            }
        })
        .collect();
    let mut reps: Vec<Vec<Matrix>> = chars[..4]
        .iter()
        .map(|row| (0..8).map(|x| scalar_matrix(row[class_of[x]].clone())).collect())
        .collect();
    reps.push(two_dim);
    let group = ConcreteGroup { order: 8, mul, inv, class_of, reps };
    Builtin { data, group }
}

/// Built-in groups: `trivial`, `cyclic:k` (or `cyclic(k)`), `klein4`, `quaternion8`.
pub fn builtin(name: &str) -> Result<Builtin, GammaError> {
    let name = name.trim();
    match name {
        "trivial" => return Ok(cyclic(1, "trivial".into())),
        "klein4" => return Ok(klein4()),
        "quaternion8" | "q8" => return Ok(quaternion8()),
        _ => {}
    }
    let arg = name
        .strip_prefix("cyclic:")
        .or_else(|| name.strip_prefix("cyclic(").and_then(|s| s.strip_suffix(')')));
    match arg.and_then(|s| s.trim().parse::<u32>().ok()) {
        Some(k) if k >= 1 => Ok(cyclic(k, format!("cyclic({k})"))),
        _ => Err(GammaError::UnknownBuiltin(name.into())),
    }
}

/// Affine Dynkin types, untwisted.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AffineType {
    A(usize),
    D(usize),
    E(usize),
}

impl fmt::Display for AffineType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AffineType::A(n) => write!(f, "A_{n}^(1)"),
            AffineType::D(n) => write!(f, "D_{n}^(1)"),
            AffineType::E(n) => write!(f, "E_{n}^(1)"),
        }
    }
}

fn from_edges(nodes: usize, edges: &[(usize, usize)]) -> Vec<Vec<i64>> {
    let mut m = vec![vec![0i64; nodes]; nodes];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 2;
    }
    for &(a, b) in edges {
        m[a][b] -= 1;
        m[b][a] -= 1;
    }
    m
}

impl AffineType {
    pub fn cartan(&self) -> Vec<Vec<i64>> {
        match *self {
            AffineType::A(1) => vec![vec![2, -2], vec![-2, 2]],
            AffineType::A(n) => {
                let e: Vec<_> = (0..=n).map(|i| (i, (i + 1) % (n + 1))).collect();
                from_edges(n + 1, &e)
            }
            AffineType::D(n) => {
                // nodes 0,1 hang off 2; chain 2..n-2; nodes n-1, n hang off n-2
                let mut e = vec![(0, 2), (1, 2)];
                for i in 2..n - 2 {
                    e.push((i, i + 1));
                }
                e.push((n - 2, n - 1));
                e.push((n - 2, n));
                from_edges(n + 1, &e)
            }
            AffineType::E(6) => from_edges(7, &[(0, 1), (1, 2), (2, 3), (3, 4), (2, 5), (5, 6)]),
            AffineType::E(7) => from_edges(8, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (3, 7)]),
            AffineType::E(8) => from_edges(9, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (2, 8)]),
            AffineType::E(n) => panic!("no affine E_{n}"),
        }
    }

    fn candidates(nodes: usize) -> Vec<AffineType> {
        let mut out = Vec::new();
        if nodes >= 2 {
            out.push(AffineType::A(nodes - 1));
        }
        if nodes >= 5 {
            out.push(AffineType::D(nodes - 1));
        }
        match nodes {
            7 => out.push(AffineType::E(6)),
            8 => out.push(AffineType::E(7)),
            9 => out.push(AffineType::E(8)),
            _ => {}
        }
        out
    }
}

fn dynkin_graph(m: &[Vec<i64>]) -> UnGraph<i64, i64> {
    let mut g = UnGraph::new_undirected();
    let nodes: Vec<_> = (0..m.len()).map(|i| g.add_node(m[i][i])).collect();
    for i in 0..m.len() {
        for j in i + 1..m.len() {
            if m[i][j] != 0 || m[j][i] != 0 {
                g.add_edge(nodes[i], nodes[j], m[i][j] * m[j][i]);
            }
        }
    }
    g
}

/// Identifies a Cartan matrix with a stored affine Dynkin diagram, up to relabeling.
pub fn identify_affine(m: &[Vec<i64>]) -> Option<AffineType> {
    if m.iter().any(|r| r.len() != m.len()) {
        return None;
    }
    let g = dynkin_graph(m);
    AffineType::candidates(m.len()).into_iter().find(|t| {
        let h = dynkin_graph(&t.cartan());
        petgraph::algo::is_isomorphic_matching(&g, &h, |a, b| a == b, |a, b| a == b)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_validate() {
        for name in ["trivial", "cyclic:2", "cyclic(3)", "cyclic:6", "klein4", "quaternion8"] {
            let b = builtin(name).unwrap();
            // classes from orbits agree with the table
            let orbits = b.group.conjugacy_orbits();
            assert_eq!(orbits.len(), b.data.num_classes(), "{name}");
            for orbit in orbits {
                let c = b.group.class_of[orbit[0]];
                assert!(orbit.iter().all(|&x| b.group.class_of[x] == c));
                assert_eq!(orbit.len() as u64, b.data.classes[c].size);
                assert_eq!(b.group.element_order(orbit[0]), b.data.classes[c].element_order);
                let inv_class = b.group.class_of[b.group.inv[orbit[0]]];
                assert_eq!(inv_class, b.data.inverse(c));
            }
            // explicit matrices reproduce the characters and multiply correctly
            for i in 0..b.data.num_classes() {
                for x in 0..b.group.order {
                    assert_eq!(b.group.trace(i, x), b.data.chars[i][b.group.class_of[x]]);
                }
            }
        }
    }

    #[test]
    fn quaternion_matrices_are_homomorphic() {
        let b = builtin("quaternion8").unwrap();
        let reps = &b.group.reps[4];
        for x in 0..8 {
            for y in 0..8 {
                let a = &reps[x];
                let c = &reps[y];
                let mut prod = vec![vec![CycScalar::zero(); 2]; 2];
                for r in 0..2 {
                    for s in 0..2 {
                        for t in 0..2 {
                            prod[r][s] = &prod[r][s] + &(&a[r][t] * &c[t][s]);
                        }
                    }
                }
                assert_eq!(prod, reps[b.group.mul[x][y]]);
            }
        }
        assert_eq!(b.data.classes.iter().map(|c| c.size).collect::<Vec<_>>(), vec![1, 1, 2, 2, 2]);
    }

    #[test]
    fn cyclic2_table() {
        let b = builtin("cyclic:2").unwrap();
        let vals: Vec<Vec<i64>> = b.data.chars.iter().map(|r| r.iter().map(|v| v.to_i64().unwrap()).collect()).collect();
        assert_eq!(vals, vec![vec![1, 1], vec![1, -1]]);
    }

    #[test]
    fn weighted_forms() {
        let g3 = builtin("cyclic:3").unwrap().data;
        let std = VirtualChar::standard(3);
        for i in 0..3 {
            for j in 0..3 {
                let v = g3.weighted_form(&std, &g3.basis(i), &g3.basis(j));
                assert_eq!(v, CycScalar::from_int((i == j) as i64));
            }
        }
        let g2 = builtin("cyclic:2").unwrap().data;
        let xi = g2.mckay_xi(None).unwrap();
        assert_eq!(xi.coeffs, vec![2, -2]);
        assert_eq!(g2.cartan_matrix(&xi).unwrap(), vec![vec![2, -2], vec![-2, 2]]);
        let zero = VirtualChar { coeffs: vec![0, 0] };
        assert!(g2.gram(&zero).iter().flatten().all(|v| v.is_zero()));
    }

    #[test]
    fn mckay_types() {
        for k in 2..=6u32 {
            let g = builtin(&format!("cyclic:{k}")).unwrap().data;
            let xi = g.mckay_xi(None).unwrap();
            assert!(xi.is_self_dual(&g));
            let m = g.cartan_matrix(&xi).unwrap();
            assert!(m.iter().all(|r| r.iter().sum::<i64>() == 0));
            assert_eq!(identify_affine(&m), Some(AffineType::A(k as usize - 1)));
        }
        let q = builtin("quaternion8").unwrap().data;
        let xi = q.mckay_xi(None).unwrap();
        assert_eq!(xi.coeffs, vec![2, 0, 0, 0, -1]);
        let m = q.cartan_matrix(&xi).unwrap();
        assert_eq!(identify_affine(&m), Some(AffineType::D(4)));
        // null vector is the degree vector
        for row in &m {
            let s: i64 = row.iter().enumerate().map(|(j, a)| a * q.degree(j)).sum();
            assert_eq!(s, 0);
        }
        assert!(builtin("trivial").unwrap().data.mckay_xi(None).is_err());
    }

    #[test]
    fn stored_affine_data_is_affine() {
        for t in [AffineType::A(1), AffineType::A(4), AffineType::D(4), AffineType::D(6), AffineType::E(6), AffineType::E(7), AffineType::E(8)] {
            assert_eq!(identify_affine(&t.cartan()), Some(t));
        }
    }

    #[test]
    fn load_round_trip_and_errors() {
        let g = builtin("cyclic:3").unwrap().data;
        let doc = serde_json::to_vec(&g.to_document()).unwrap();
        let back = load_gamma(&doc).unwrap();
        assert_eq!(back, g);

        let mut bad = g.to_document();
        bad.chars[2] = bad.chars[1].clone();
        let err = load_gamma(&serde_json::to_vec(&bad).unwrap()).unwrap_err();
        assert!(matches!(err, GammaError::Orthogonality(1, 2)), "{err}");

        let mut bad = g.to_document();
        bad.classes[1].size = 2;
        assert!(matches!(load_gamma(&serde_json::to_vec(&bad).unwrap()), Err(GammaError::SizeSum { .. })));

        assert!(matches!(load_gamma(b"{\"name\": 3}"), Err(GammaError::Schema(_))));
    }
}
