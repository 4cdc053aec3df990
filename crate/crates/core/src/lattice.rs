//! The lattice `R_ℤ(Γ)` mod 2, its alternating form `c₁`, a maximal isotropic
//! subspace `Φ̄`, and the central extension acting on `ℂ[R_ℤ(Γ)/Φ]`.
//!
//! Vectors over 𝔽₂ are bitmasks with bit `i` for `γ_i`.

use crate::error::GammaError;
use crate::gamma::{GammaData, VirtualChar};
use crate::scalars::CycScalar;

pub type LatticeVec = Vec<i64>;

pub fn reduce_mod2(v: &[i64]) -> u64 {
    v.iter().enumerate().fold(0u64, |acc, (i, &x)| if x.rem_euclid(2) == 1 { acc | 1 << i } else { acc })
}

/// A fourth root of unity `i^k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Phase(pub u8);

impl Phase {
    pub const ONE: Phase = Phase(0);
    pub const MINUS_ONE: Phase = Phase(2);

    pub fn from_sign(s: i8) -> Phase {
        if s >= 0 {
            Phase(0)
        } else {
            Phase(2)
        }
    }

    pub fn mul(self, other: Phase) -> Phase {
        Phase((self.0 + other.0) % 4)
    }

    pub fn inv(self) -> Phase {
        Phase((4 - self.0) % 4)
    }

    pub fn to_scalar(self) -> CycScalar {
        match self.0 {
            0 => CycScalar::one(),
            2 => CycScalar::from_int(-1),
            k => CycScalar::zeta(4, k as i64),
        }
    }
}

fn parity(x: u64) -> u8 {
    (x.count_ones() % 2) as u8
}

/// Row-reduced basis of the span of `vs`.
fn span_basis(vs: &[u64]) -> Vec<u64> {
    let mut basis: Vec<u64> = Vec::new();
    for &v in vs {
        let mut w = v;
        for &b in &basis {
            w = w.min(w ^ b);
        }
        if w != 0 {
            basis.push(w);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis
}

fn in_span(basis: &[u64], v: u64) -> bool {
    let mut w = v;
    for &b in basis {
        w = w.min(w ^ b);
    }
    w == 0
}

#[derive(Clone, Debug)]
pub struct F2Data {
    pub dim: usize,
    /// Row `i` has bit `j` set when `c₁(γ_i, γ_j) = 1`.
    pub c1_rows: Vec<u64>,
    pub rank: usize,
    pub radical: Vec<u64>,
    pub phi_basis: Vec<u64>,
    /// `s(φ_k)`: the scalar by which `e_{φ_k}` acts on `e^{[0]}`.
    pub phi_scalars: Vec<Phase>,
    /// Complement basis; coset `t` is represented by `Σ_{k ∈ t} complement[k]`.
    pub complement: Vec<u64>,
    /// Rows expressing each unit vector in the basis `phi_basis ++ complement`.
    coords_of_unit: Vec<u64>,
}

impl F2Data {
    pub fn build(g: &GammaData, xi: &VirtualChar) -> Result<F2Data, GammaError> {
        Ok(Self::from_gram(&g.cartan_matrix(xi)?))
    }

    /// From the integer Gram matrix `⟨γ_i, γ_j⟩_ξ`.
    pub fn from_gram(gram: &[Vec<i64>]) -> F2Data {
        let dim = gram.len();
        assert!(dim <= 63, "rank too large for bitmask representation");
        let mut c1_rows = vec![0u64; dim];
        for i in 0..dim {
            for j in 0..dim {
                let v = gram[i][j] + gram[i][i] * gram[j][j];
                if v.rem_euclid(2) == 1 {
                    c1_rows[i] |= 1 << j;
                }
            }
        }
        let mut f = F2Data {
            dim,
            c1_rows,
            rank: 0,
            radical: Vec::new(),
            phi_basis: Vec::new(),
            phi_scalars: Vec::new(),
            complement: Vec::new(),
            coords_of_unit: Vec::new(),
        };
        f.rank = span_basis(&f.c1_rows).len();
        f.radical = (1..(1u64 << dim)).filter(|&v| f.c1_image(v) == 0).collect::<Vec<_>>();
        f.radical = span_basis(&f.radical);
        f.build_isotropic();
        f.build_complement();
        f
    }

    fn c1_image(&self, v: u64) -> u64 {
        (0..self.dim).filter(|&i| v >> i & 1 == 1).fold(0u64, |acc, i| acc ^ self.c1_rows[i])
    }

    /// `c₁(x, y)` over 𝔽₂.
    pub fn c1(&self, x: u64, y: u64) -> u8 {
        parity(self.c1_image(x) & y)
    }

    /// Exponent of `ε(x, y) = (−1)^{Σ_{i>j} c₁(γ_i,γ_j) x_i y_j}`.
    fn eps_exp(&self, x: u64, y: u64) -> u8 {
        let mut acc = 0u8;
        for i in 0..self.dim {
            if x >> i & 1 == 1 {
                let lower = self.c1_rows[i] & ((1u64 << i) - 1);
                acc ^= parity(lower & y);
            }
        }
        acc
    }

    pub fn epsilon_mask(&self, x: u64, y: u64) -> i8 {
        if self.eps_exp(x, y) == 0 {
            1
        } else {
            -1
        }
    }

    pub fn epsilon(&self, alpha: &[i64], beta: &[i64]) -> i8 {
        self.epsilon_mask(reduce_mod2(alpha), reduce_mod2(beta))
    }

    /// Greedy maximal isotropic subspace containing the radical, preferring
    /// vectors with `ε(v, v) = 1` so that the phases stay real where possible.
    fn build_isotropic(&mut self) {
        let target = self.dim - self.rank / 2;
        let mut basis = self.radical.clone();
        for prefer_real in [true, false] {
            for v in 1..(1u64 << self.dim) {
                if basis.len() >= target {
                    break;
                }
                if prefer_real && self.eps_exp(v, v) != 0 {
                    continue;
                }
                if in_span(&span_basis(&basis), v) {
                    continue;
                }
                if basis.iter().all(|&b| self.c1(v, b) == 0) {
                    basis.push(v);
                }
            }
        }
        debug_assert_eq!(basis.len(), target);
        self.phi_scalars = basis.iter().map(|&b| if self.eps_exp(b, b) == 0 { Phase(0) } else { Phase(1) }).collect();
        self.phi_basis = basis;
    }

    fn build_complement(&mut self) {
        let mut all = self.phi_basis.clone();
        for i in 0..self.dim {
            let e = 1u64 << i;
            if !in_span(&span_basis(&all), e) {
                all.push(e);
                self.complement.push(e);
            }
        }
        // invert the matrix whose columns are `all`
        let n = self.dim;
        // rows: augmented [basis vector as row | identity]
        let mut rows: Vec<(u64, u64)> = all.iter().enumerate().map(|(k, &v)| (v, 1u64 << k)).collect();
        // Gaussian elimination to reduce each unit vector
        let mut pivots: Vec<(usize, u64, u64)> = Vec::new();
        for (v, tag) in rows.drain(..) {
            let (mut v, mut tag) = (v, tag);
            for &(bit, pv, pt) in &pivots {
                if v >> bit & 1 == 1 {
                    v ^= pv;
                    tag ^= pt;
                }
            }
            if v == 0 {
                continue;
            }
            let bit = v.trailing_zeros() as usize;
            for p in pivots.iter_mut() {
                if p.1 >> bit & 1 == 1 {
                    p.1 ^= v;
                    p.2 ^= tag;
                }
            }
            pivots.push((bit, v, tag));
        }
        self.coords_of_unit = (0..n)
            .map(|i| pivots.iter().find(|p| p.1 == 1u64 << i).map(|p| p.2).expect("full rank"))
            .collect();
    }

    /// Coordinates of `w` in the basis `phi_basis ++ complement`, as a bitmask.
    fn coords(&self, w: u64) -> u64 {
        (0..self.dim).filter(|&i| w >> i & 1 == 1).fold(0u64, |acc, i| acc ^ self.coords_of_unit[i])
    }

    pub fn num_cosets(&self) -> usize {
        1 << self.complement.len()
    }

    pub fn coset_rep(&self, t: usize) -> u64 {
        (0..self.complement.len()).filter(|&k| t >> k & 1 == 1).fold(0u64, |acc, k| acc ^ self.complement[k])
    }

    /// Splits `w = rep_t + φ`; returns `(t, φ coordinates in phi_basis)`.
    pub fn decompose(&self, w: u64) -> (usize, u64) {
        let c = self.coords(w);
        let p = self.phi_basis.len();
        let phi = c & ((1u64 << p) - 1);
        let t = (c >> p) as usize;
        (t, phi)
    }

    fn phi_vector(&self, coords: u64) -> u64 {
        (0..self.phi_basis.len()).filter(|&k| coords >> k & 1 == 1).fold(0u64, |acc, k| acc ^ self.phi_basis[k])
    }

    /// Scalar of `e_φ` on `e^{[0]}` for `φ = Σ x_k φ_k`.
    fn phi_scalar(&self, coords: u64) -> Phase {
        let mut ph = Phase::ONE;
        let ks: Vec<usize> = (0..self.phi_basis.len()).filter(|&k| coords >> k & 1 == 1).collect();
        for (a, &k) in ks.iter().enumerate() {
            ph = ph.mul(self.phi_scalars[k]);
            for &l in &ks[a + 1..] {
                if self.eps_exp(self.phi_basis[k], self.phi_basis[l]) == 1 {
                    ph = ph.mul(Phase::MINUS_ONE);
                }
            }
        }
        ph
    }

    /// `e_ᾱ . e^{[β]}` on the coset module induced from `Φ̄`.
    ///
    /// With `α + rep_t = rep_{t′} + φ` the phase is `ε(α, rep_t) ε(rep_{t′}, φ) s(φ)`.
    pub fn coset_act_mask(&self, alpha: u64, t: usize) -> (Phase, usize) {
        let b = self.coset_rep(t);
        let w = alpha ^ b;
        let (t2, coords) = self.decompose(w);
        let phi = self.phi_vector(coords);
        let b2 = self.coset_rep(t2);
        let mut ph = Phase::from_sign(self.epsilon_mask(alpha, b));
        ph = ph.mul(Phase::from_sign(self.epsilon_mask(b2, phi)));
        ph = ph.mul(self.phi_scalar(coords));
        (ph, t2)
    }

    pub fn coset_act(&self, alpha: &[i64], t: usize) -> (Phase, usize) {
        self.coset_act_mask(reduce_mod2(alpha), t)
    }

    /// Coset index of a lattice vector.
    pub fn coset_of(&self, v: &[i64]) -> usize {
        self.decompose(reduce_mod2(v)).0
    }
}
