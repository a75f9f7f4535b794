//! Level-`n` blocks of the Dirac operator.
//!
//! The restriction `D_n` of the Dirac operator to the isotypical component
//! `Hom(V_n, Σ₃)` splits into two real tridiagonal `(n+1)×(n+1)` blocks `𝒜_n`
//! and `ℬ_n` in the basis `{A_0..A_n, B_0..B_n}`. [`build_block`] writes them
//! down from the explicit three-term recurrences; [`build_from_representation`]
//! assembles the same operator from the su(2) representation matrices and the
//! Clifford matrices so the two constructions can be checked against each
//! other.
//!
//! Matrix convention: column `k` holds the coordinates of the image of the
//! `k`-th basis vector, so `sub[k] = M[k+1][k]` and `sup[k] = M[k][k+1]`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric::Metric;

/// Imaginary parts and cross-block couplings above this bound are reported
/// as errors by [`RepresentationOperator::split`].
pub const REPRESENTATION_RESIDUE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BlockTag {
    A,
    B,
}

impl BlockTag {
    pub const BOTH: [BlockTag; 2] = [BlockTag::A, BlockTag::B];
}

/// A real tridiagonal block of `D_n` (or of `D'_n` when built unshifted).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiracBlock {
    pub level: usize,
    pub tag: BlockTag,
    pub diag: Vec<f64>,
    /// `sub[k] = M[k+1][k]`
    pub sub: Vec<f64>,
    /// `sup[k] = M[k][k+1]`
    pub sup: Vec<f64>,
}

impl DiracBlock {
    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn dense(&self) -> Vec<Vec<f64>> {
        let n = self.dim();
        let mut m = vec![vec![0.0; n]; n];
        for (k, &d) in self.diag.iter().enumerate() {
            m[k][k] = d;
        }
        for k in 0..self.sub.len() {
            m[k + 1][k] = self.sub[k];
            m[k][k + 1] = self.sup[k];
        }
        m
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.diag
            .iter()
            .chain(&self.sub)
            .chain(&self.sup)
            .fold(0.0_f64, |acc, x| acc.max(x.abs()))
    }

    pub fn trace(&self) -> f64 {
        self.diag.iter().sum()
    }

    /// `trace(M²) = Σ dₖ² + 2 Σ subₖ·supₖ`.
    pub fn trace_of_square(&self) -> f64 {
        let d: f64 = self.diag.iter().map(|x| x * x).sum();
        let o: f64 = self.sub.iter().zip(&self.sup).map(|(l, u)| l * u).sum();
        d + 2.0 * o
    }

    /// The same block with `shift` added to the diagonal.
    pub fn shifted(&self, shift: f64) -> DiracBlock {
        DiracBlock {
            diag: self.diag.iter().map(|d| d + shift).collect(),
            ..self.clone()
        }
    }

    /// Characteristic polynomial `det(x·I − M)`, coefficients in descending
    /// powers (leading coefficient 1), via the continuant recurrence.
    pub fn char_poly(&self) -> Vec<f64> {
        // Polynomials stored ascending while building.
        let mut prev2: Vec<f64> = vec![1.0];
        let mut prev1: Vec<f64> = vec![-self.diag[0], 1.0];
        for k in 1..self.dim() {
            let coupling = self.sub[k - 1] * self.sup[k - 1];
            let mut next = vec![0.0; k + 2];
            for (i, &p) in prev1.iter().enumerate() {
                next[i + 1] += p;
                next[i] -= self.diag[k] * p;
            }
            for (i, &p) in prev2.iter().enumerate() {
                next[i] -= coupling * p;
            }
            prev2 = prev1;
            prev1 = next;
        }
        prev1.reverse();
        prev1
    }
}

/// `D'_n` restricted to the A- or B-subspace, without the `−C` shift.
pub fn build_primed_block(m: &Metric, n: usize, tag: BlockTag) -> DiracBlock {
    let (a, b, c) = (m.a(), m.b(), m.c());
    let nf = n as f64;
    let mut diag = Vec::with_capacity(n + 1);
    let mut sub = Vec::with_capacity(n);
    let mut sup = Vec::with_capacity(n);

    // The A-recurrence for even k is the B-recurrence for odd k and vice versa.
    let pattern_plus = |k: usize| match tag {
        BlockTag::A => k.is_multiple_of(2),
        BlockTag::B => k % 2 == 1,
    };

    for k in 0..=n {
        let kf = k as f64;
        diag.push(if pattern_plus(k) { a } else { -a } * (nf - 2.0 * kf));
        if k < n {
            // Coefficient of basis vector k+1 in the image of basis vector k.
            let down = if pattern_plus(k) { c + b } else { c - b };
            sub.push(down * (kf + 1.0));
            // Coefficient of basis vector k in the image of basis vector k+1:
            // (n - (k+1) + 1) times the "previous" factor of row k+1.
            let up = if pattern_plus(k + 1) { c - b } else { c + b };
            sup.push(up * (nf - kf));
        }
    }
    DiracBlock {
        level: n,
        tag,
        diag,
        sub,
        sup,
    }
}

/// Block `𝒜_n = 𝒜'_n − C·I` or `ℬ_n = ℬ'_n − C·I` of `D_n`.
pub fn build_block(m: &Metric, n: usize, tag: BlockTag) -> DiracBlock {
    build_primed_block(m, n, tag).shifted(-m.c_shift())
}

/// Both blocks of `D_n`, A first.
pub fn build_level(m: &Metric, n: usize) -> [DiracBlock; 2] {
    [
        build_block(m, n, BlockTag::A),
        build_block(m, n, BlockTag::B),
    ]
}

/// Dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
struct CMat {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMat {
    fn zeros(rows: usize, cols: usize) -> Self {
        CMat {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    fn at(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.cols + c]
    }

    fn set(&mut self, r: usize, c: usize, v: Complex64) {
        self.data[r * self.cols + c] = v;
    }

    fn mul(&self, other: &CMat) -> CMat {
        assert_eq!(self.cols, other.rows);
        let mut out = CMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let x = self.at(i, k);
                if x == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += x * other.at(k, j);
                }
            }
        }
        out
    }

    fn from_2x2(m: [[Complex64; 2]; 2]) -> Self {
        CMat {
            rows: 2,
            cols: 2,
            data: vec![m[0][0], m[0][1], m[1][0], m[1][1]],
        }
    }
}

/// `π_{n*}(X_ℓ)` for ℓ = 1, 2, 3 on the basis `P_k = z^{n−k} w^k`.
fn representation_matrices(m: &Metric, n: usize) -> [CMat; 3] {
    let i = Complex64::i();
    let nf = n as f64;
    let mut x1 = CMat::zeros(n + 1, n + 1);
    let mut x2 = CMat::zeros(n + 1, n + 1);
    let mut x3 = CMat::zeros(n + 1, n + 1);
    for k in 0..=n {
        let kf = k as f64;
        x1.set(k, k, i * m.a() * (nf - 2.0 * kf));
        if k > 0 {
            x2.set(k - 1, k, Complex64::new(m.b() * kf, 0.0));
            x3.set(k - 1, k, i * m.c() * kf);
        }
        if k < n {
            x2.set(k + 1, k, Complex64::new(-m.b() * (nf - kf), 0.0));
            x3.set(k + 1, k, i * m.c() * (nf - kf));
        }
    }
    [x1, x2, x3]
}

/// Clifford multiplication by `e_1, e_2, e_3` on `Σ₃ = C²` in the basis
/// `{Z_1, Z_2}`; with this choice `e_1·e_2·e_3` acts as `−1`.
fn clifford_matrices() -> [CMat; 3] {
    let z = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::i();
    [
        CMat::from_2x2([[i, z], [z, -i]]),
        CMat::from_2x2([[z, one], [-one, z]]),
        CMat::from_2x2([[z, i], [i, z]]),
    ]
}

/// Row of `Σ₃` (0 for `Z_1`, 1 for `Z_2`) that the basis element hits at `P_k`.
fn spinor_row(tag: BlockTag, k: usize) -> usize {
    match (tag, k % 2) {
        (BlockTag::A, 0) | (BlockTag::B, 1) => 0,
        _ => 1,
    }
}

/// `D_n` as a dense complex operator on `Hom(V_n, Σ₃)`, flattened in the
/// ordered basis `{A_0..A_n, B_0..B_n}`.
#[derive(Debug, Clone, PartialEq)]
pub struct RepresentationOperator {
    pub level: usize,
    dim: usize,
    data: Vec<Complex64>,
}

impl RepresentationOperator {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    /// Largest imaginary part over all entries.
    pub fn max_imaginary(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |acc, z| acc.max(z.im.abs()))
    }

    /// Splits into the A and B blocks. Fails if an imaginary part, an entry
    /// coupling the two subspaces, or an entry off the tridiagonal band
    /// exceeds [`REPRESENTATION_RESIDUE_TOL`].
    pub fn split(&self) -> Result<[DiracBlock; 2]> {
        let n = self.level;
        let size = n + 1;
        for row in 0..self.dim {
            for col in 0..self.dim {
                let z = self.entry(row, col);
                if z.im.abs() > REPRESENTATION_RESIDUE_TOL {
                    return Err(Error::ImaginaryResidue {
                        n,
                        row,
                        col,
                        residue: z.im.abs(),
                    });
                }
                let same_block = (row < size) == (col < size);
                let banded = (row % size).abs_diff(col % size) <= 1;
                if (!same_block || !banded) && z.re.abs() > REPRESENTATION_RESIDUE_TOL {
                    return Err(Error::BlockCoupling { n, row, col });
                }
            }
        }
        let extract = |tag: BlockTag, offset: usize| {
            let diag = (0..size)
                .map(|k| self.entry(offset + k, offset + k).re)
                .collect();
            let sub = (0..n)
                .map(|k| self.entry(offset + k + 1, offset + k).re)
                .collect();
            let sup = (0..n)
                .map(|k| self.entry(offset + k, offset + k + 1).re)
                .collect();
            DiracBlock {
                level: n,
                tag,
                diag,
                sub,
                sup,
            }
        };
        Ok([extract(BlockTag::A, 0), extract(BlockTag::B, size)])
    }
}

/// Assembles `f ↦ −Σ_ℓ e_ℓ·(f ∘ π_{n*}(X_ℓ)) − C·f` on `Hom(V_n, Σ₃)`, where
/// `f` is a `2×(n+1)` complex matrix whose column `m` is `f(P_m)`.
pub fn build_from_representation(m: &Metric, n: usize) -> RepresentationOperator {
    let size = n + 1;
    let dim = 2 * size;
    let reps = representation_matrices(m, n);
    let cliff = clifford_matrices();
    let c_shift = m.c_shift();

    let basis = |j: usize| -> (BlockTag, usize) {
        if j < size {
            (BlockTag::A, j)
        } else {
            (BlockTag::B, j - size)
        }
    };
    // Inverse of `basis`: which flattened index owns the matrix unit at
    // (spinor row s, column k).
    let index_of = |s: usize, k: usize| -> usize {
        if spinor_row(BlockTag::A, k) == s {
            k
        } else {
            size + k
        }
    };

    let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
    for j in 0..dim {
        let (tag, k) = basis(j);
        let mut f = CMat::zeros(2, size);
        f.set(spinor_row(tag, k), k, Complex64::new(1.0, 0.0));

        let mut image = CMat::zeros(2, size);
        for (e, x) in cliff.iter().zip(&reps) {
            let term = e.mul(&f.mul(x));
            for (acc, t) in image.data.iter_mut().zip(&term.data) {
                *acc -= *t;
            }
        }
        for (acc, v) in image.data.iter_mut().zip(&f.data) {
            *acc -= c_shift * *v;
        }

        for s in 0..2 {
            for col in 0..size {
                data[index_of(s, col) * dim + j] = image.at(s, col);
            }
        }
    }
    RepresentationOperator {
        level: n,
        dim,
        data,
    }
}

/// Characteristic polynomial shared by `𝒜'_n` and `ℬ'_n` for `n ∈ {2, 4}`,
/// descending coefficients.
pub fn char_poly_small_n(m: &Metric, n: usize) -> Result<Vec<f64>> {
    let (a, b, c) = (m.a(), m.b(), m.c());
    let (a2, b2, c2) = (a * a, b * b, c * c);
    let sum_sq = a2 + b2 + c2;
    let abc = a * b * c;
    match n {
        2 => Ok(vec![1.0, 0.0, -4.0 * sum_sq, -16.0 * abc]),
        4 => Ok(vec![
            1.0,
            0.0,
            -20.0 * sum_sq,
            -80.0 * abc,
            64.0 * (a2 * a2 + b2 * b2 + c2 * c2 + 4.0 * (a2 * b2 + b2 * c2 + c2 * a2)),
            768.0 * abc * sum_sq,
        ]),
        _ => Err(Error::UnsupportedLevel {
            what: "closed-form characteristic polynomial",
            supported: "2 and 4",
            n,
        }),
    }
}

/// Explicit eigenvalues of `D_n` for `n ∈ {1, 3}`.
///
/// For `n = 1` the order is `a+b+c−C` (that is, `μ`), `a−b−c−C`, `−a+b−c−C`,
/// `−a−b+c−C`. For `n = 3` the eight radical expressions are returned in
/// their conventional order: entries 0..4 belong to `𝒜_3`, 4..8 to `ℬ_3`.
pub fn closed_form_eigs(m: &Metric, n: usize) -> Result<Vec<f64>> {
    let (a, b, c) = (m.a(), m.b(), m.c());
    let shift = m.c_shift();
    match n {
        1 => Ok(vec![
            a + b + c - shift,
            a - b - c - shift,
            -a + b - c - shift,
            -a - b + c - shift,
        ]),
        3 => {
            let sq = a * a + b * b + c * c;
            let (ab, bc, ca) = (a * b, b * c, c * a);
            let r1 = (sq - ab + bc + ca).sqrt();
            let r3 = (sq + ab + bc - ca).sqrt();
            let r5 = (sq - ab - bc - ca).max(0.0).sqrt();
            let r7 = (sq + ab - bc + ca).sqrt();
            Ok([
                a + b - c - 2.0 * r1,
                a + b - c + 2.0 * r1,
                a - b + c - 2.0 * r3,
                a - b + c + 2.0 * r3,
                -a - b - c - 2.0 * r5,
                -a - b - c + 2.0 * r5,
                -a + b + c - 2.0 * r7,
                -a + b + c + 2.0 * r7,
            ]
            .iter()
            .map(|x| x - shift)
            .collect())
        }
        _ => Err(Error::UnsupportedLevel {
            what: "closed-form eigenvalues",
            supported: "1 and 3",
            n,
        }),
    }
}

/// Largest coefficient difference between the characteristic polynomials of
/// `𝒜'_n` and `ℬ'_n`, relative to the largest coefficient.
pub fn char_poly_gap(m: &Metric, n: usize) -> f64 {
    let pa = build_primed_block(m, n, BlockTag::A).char_poly();
    let pb = build_primed_block(m, n, BlockTag::B).char_poly();
    let scale = pa.iter().chain(&pb).fold(1.0_f64, |s, x| s.max(x.abs()));
    pa.iter()
        .zip(&pb)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
        / scale
}
