//! Integer chain complexes and the Bott-type Morse / Floer tables.
//!
//! Each critical torus `G^l ≅ T^n` is modelled by the minimal product CW
//! structure of `T^n` (one cell per subset of coordinates, all cellular
//! boundaries zero). Components in different free homotopy classes cannot be
//! joined by flow lines, so the Bott-type complexes are direct sums of these
//! blocks.

mod matrix;
mod snf;

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::One;
use thiserror::Error;

pub use matrix::IntMatrix;
pub use snf::{smith_normal_form, SmithForm};

use crate::geodesics::enumerate_components;
use crate::torus::{FlatTorus, LatticeVector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomologyError {
    #[error("boundary in degree {degree} has shape {found:?}, expected {expected:?}")]
    ShapeMismatch { degree: i64, expected: (usize, usize), found: (usize, usize) },
    #[error("expected {expected} boundary matrices, got {found}")]
    BoundaryCount { expected: usize, found: usize },
    #[error("not a complex: the boundary composite into degree {0} is nonzero")]
    InvalidComplex(i64),
    #[error("the Morse–Witten boundary needs the connecting-orbit count")]
    MissingOrbitCount,
    #[error("the perturbed complex needs a nonzero winding")]
    ZeroWinding,
    #[error("complexes have different coefficient rings")]
    CoefficientMismatch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Coefficients {
    Integers,
    Mod2,
}

impl Coefficients {
    pub fn symbol(self) -> &'static str {
        match self {
            Coefficients::Integers => "Z",
            Coefficients::Mod2 => "Z2",
        }
    }
}

/// Graded free modules `C_i` with boundaries `∂_i : C_i → C_{i-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainComplex {
    coefficients: Coefficients,
    lowest_degree: i64,
    ranks: Vec<usize>,
    /// `boundaries[i]` is `∂` out of degree `lowest_degree + i`.
    boundaries: Vec<IntMatrix>,
}

impl ChainComplex {
    /// Checks matrix shapes; `∂∂ = 0` is checked by [`ChainComplex::check`].
    pub fn new(
        coefficients: Coefficients,
        lowest_degree: i64,
        ranks: Vec<usize>,
        boundaries: Vec<IntMatrix>,
    ) -> Result<Self, HomologyError> {
        if boundaries.len() != ranks.len() {
            return Err(HomologyError::BoundaryCount { expected: ranks.len(), found: boundaries.len() });
        }
        for (i, b) in boundaries.iter().enumerate() {
            let target = if i == 0 { 0 } else { ranks[i - 1] };
            let expected = (target, ranks[i]);
            if (b.rows(), b.cols()) != expected {
                return Err(HomologyError::ShapeMismatch {
                    degree: lowest_degree + i as i64,
                    expected,
                    found: (b.rows(), b.cols()),
                });
            }
        }
        Ok(Self { coefficients, lowest_degree, ranks, boundaries })
    }

    /// A complex with all boundaries zero.
    pub fn with_zero_boundaries(coefficients: Coefficients, lowest_degree: i64, ranks: Vec<usize>) -> Self {
        let boundaries = (0..ranks.len())
            .map(|i| IntMatrix::zeros(if i == 0 { 0 } else { ranks[i - 1] }, ranks[i]))
            .collect();
        Self { coefficients, lowest_degree, ranks, boundaries }
    }

    pub fn coefficients(&self) -> Coefficients {
        self.coefficients
    }

    pub fn lowest_degree(&self) -> i64 {
        self.lowest_degree
    }

    pub fn highest_degree(&self) -> i64 {
        self.lowest_degree + self.ranks.len() as i64 - 1
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> {
        self.lowest_degree..=self.highest_degree()
    }

    pub fn rank(&self, degree: i64) -> usize {
        self.index(degree).map_or(0, |i| self.ranks[i])
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    /// `∂_degree`, or `None` where it is the zero map between zero modules.
    pub fn boundary(&self, degree: i64) -> Option<&IntMatrix> {
        self.index(degree).map(|i| &self.boundaries[i])
    }

    fn index(&self, degree: i64) -> Option<usize> {
        let i = degree - self.lowest_degree;
        (i >= 0 && (i as usize) < self.ranks.len()).then_some(i as usize)
    }

    /// Verifies `∂_{i-1} ∘ ∂_i = 0` in every degree (exactly, or mod 2).
    pub fn check(&self) -> Result<(), HomologyError> {
        for i in 1..self.ranks.len() {
            let composite = self.boundaries[i - 1].mul(&self.boundaries[i]);
            let vanishes = match self.coefficients {
                Coefficients::Integers => composite.is_zero(),
                Coefficients::Mod2 => composite.rank_mod2() == 0,
            };
            if !vanishes {
                return Err(HomologyError::InvalidComplex(self.lowest_degree + i as i64 - 2));
            }
        }
        Ok(())
    }

    /// Direct sum; the degree range becomes the union of both ranges.
    pub fn direct_sum(&self, other: &Self) -> Result<Self, HomologyError> {
        if self.coefficients != other.coefficients {
            return Err(HomologyError::CoefficientMismatch);
        }
        let lo = self.lowest_degree.min(other.lowest_degree);
        let hi = self.highest_degree().max(other.highest_degree());
        let mut ranks = Vec::new();
        let mut boundaries = Vec::new();
        for d in lo..=hi {
            ranks.push(self.rank(d) + other.rank(d));
            let block = |c: &Self| {
                c.boundary(d).cloned().unwrap_or_else(|| {
                    let target = if d == lo { 0 } else { c.rank(d - 1) };
                    IntMatrix::zeros(target, c.rank(d))
                })
            };
            let (mut a, mut b) = (block(self), block(other));
            if d == lo {
                a = IntMatrix::zeros(0, a.cols());
                b = IntMatrix::zeros(0, b.cols());
            }
            boundaries.push(a.block_diag(&b));
        }
        Self::new(self.coefficients, lo, ranks, boundaries)
    }

    /// Entrywise reduction to `Z/2` coefficients.
    pub fn reduce_mod2(&self) -> Self {
        let two = BigInt::from(2);
        let boundaries = self
            .boundaries
            .iter()
            .map(|b| IntMatrix::from_fn(b.rows(), b.cols(), |i, j| ((b.get(i, j) % &two) + &two) % &two))
            .collect();
        Self { coefficients: Coefficients::Mod2, lowest_degree: self.lowest_degree, ranks: self.ranks.clone(), boundaries }
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.degrees().map(|d| if d.rem_euclid(2) == 0 { 1 } else { -1 } * self.rank(d) as i64).sum()
    }
}

/// A finitely generated abelian group `Z^r ⊕ Z/t_1 ⊕ … ⊕ Z/t_m`, `t_1 | t_2 | …`.
///
/// Over `Z/2` coefficients `free_rank` is the vector-space dimension and
/// `torsion` stays empty.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct HomologyGroup {
    pub free_rank: usize,
    pub torsion: Vec<BigUint>,
}

impl HomologyGroup {
    pub fn free(rank: usize) -> Self {
        Self { free_rank: rank, torsion: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn render(&self, coefficients: Coefficients) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        if self.free_rank > 0 {
            let base = coefficients.symbol();
            parts.push(if self.free_rank == 1 { base.to_string() } else { alloc::format!("{base}^{}", self.free_rank) });
        }
        for t in &self.torsion {
            parts.push(alloc::format!("Z/{t}"));
        }
        parts.join(" + ")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Grading {
    /// Degree `i` is the homological degree.
    Homological,
    /// Degree `-i` carries the groups of homological degree `i`.
    CohomologicalNegative,
}

impl Grading {
    pub fn name(self) -> &'static str {
        match self {
            Grading::Homological => "homological",
            Grading::CohomologicalNegative => "cohomological-negative",
        }
    }
}

/// Groups per degree; degrees not listed are zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologyTable {
    pub label: String,
    pub grading: Grading,
    pub coefficients: Coefficients,
    pub entries: BTreeMap<i64, HomologyGroup>,
}

impl HomologyTable {
    pub fn group(&self, degree: i64) -> HomologyGroup {
        self.entries.get(&degree).cloned().unwrap_or_default()
    }

    pub fn free_rank(&self, degree: i64) -> usize {
        self.entries.get(&degree).map_or(0, |g| g.free_rank)
    }

    pub fn with_label(mut self, label: &str) -> Self {
        self.label = label.to_string();
        self
    }

    pub fn is_torsion_free(&self) -> bool {
        self.entries.values().all(|g| g.torsion.is_empty())
    }

    /// Moves the group of degree `i` to degree `-i`.
    pub fn regraded_negative(&self, label: &str) -> Self {
        let entries = self.entries.iter().map(|(&d, g)| (-d, g.clone())).collect();
        Self { label: label.to_string(), grading: Grading::CohomologicalNegative, coefficients: self.coefficients, entries }
    }
}

impl fmt::Display for HomologyTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} ({}, {})", self.label, self.grading.name(), self.coefficients.symbol())?;
        let descending = self.grading == Grading::CohomologicalNegative;
        let rows: Vec<_> = if descending { self.entries.iter().rev().collect() } else { self.entries.iter().collect() };
        for (d, g) in rows {
            writeln!(f, "  degree {d:>3}: {}", g.render(self.coefficients))?;
        }
        Ok(())
    }
}

/// `H_i = ker ∂_i / im ∂_{i+1}` in every degree of the complex.
pub fn homology_of_complex(c: &ChainComplex) -> Result<HomologyTable, HomologyError> {
    c.check()?;
    let mut entries = BTreeMap::new();
    for d in c.degrees() {
        let group = match c.coefficients {
            Coefficients::Integers => {
                let out_rank = c.boundary(d).filter(|b| !b.is_zero()).map_or(0, |b| smith_normal_form(b).rank());
                let (in_rank, torsion) = match c.boundary(d + 1).filter(|b| !b.is_zero()) {
                    Some(b) => {
                        let factors = smith_normal_form(b).invariant_factors();
                        let torsion = factors
                            .iter()
                            .filter(|x| !x.is_one())
                            .map(|x| x.magnitude().clone())
                            .collect();
                        (factors.len(), torsion)
                    }
                    None => (0, Vec::new()),
                };
                HomologyGroup { free_rank: c.rank(d) - out_rank - in_rank, torsion }
            }
            Coefficients::Mod2 => {
                let out_rank = c.boundary(d).map_or(0, IntMatrix::rank_mod2);
                let in_rank = c.boundary(d + 1).map_or(0, IntMatrix::rank_mod2);
                HomologyGroup::free(c.rank(d) - out_rank - in_rank)
            }
        };
        entries.insert(d, group);
    }
    Ok(HomologyTable { label: "homology".to_string(), grading: Grading::Homological, coefficients: c.coefficients, entries })
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Minimal product CW structure of `T^n`: `C(n, i)` cells in degree `i`, `∂ = 0`.
pub fn torus_cw_complex(n: usize) -> ChainComplex {
    ChainComplex::with_zero_boundaries(Coefficients::Integers, 0, (0..=n).map(|i| binomial(n, i)).collect())
}

/// Bott-type Morse complex of the energy below `a`: one torus block per `G^l`.
pub fn morse_bott_complex(torus: FlatTorus, action_bound: f64) -> ChainComplex {
    let n = torus.dim();
    let components = enumerate_components(torus, action_bound).len();
    // the blocks have zero boundaries, so their direct sum does too
    let block = torus_cw_complex(n);
    let ranks = block.ranks().iter().map(|r| r * components).collect();
    ChainComplex::with_zero_boundaries(Coefficients::Integers, 0, ranks)
}

pub fn morse_bott_homology(torus: FlatTorus, action_bound: f64) -> HomologyTable {
    homology_of_complex(&morse_bott_complex(torus, action_bound))
        .expect("zero-boundary complex")
        .with_label("HM^{a,Bott}")
}

/// Floer cochain complex: the Morse complex with grading `-i`.
pub fn floer_bott_cohomology(torus: FlatTorus, action_bound: f64) -> HomologyTable {
    morse_bott_homology(torus, action_bound).regraded_negative("HF^{-i}_{a,Bott}")
}

/// Homology of the sublevel set `{I ≤ 2π²|k|² + ε}`, a disjoint union of
/// contractible-fibre disk bundles over the tori `G^l`, `|l| ≤ |k|`.
///
/// Counted directly on the integer box, independently of
/// [`enumerate_components`].
pub fn sublevel_singular_homology(torus: FlatTorus, k: &LatticeVector) -> HomologyTable {
    let n = torus.dim();
    let bound = k.norm_sq();
    let reach = (0..).find(|r: &i64| r * r > bound).unwrap_or(0);
    let side = 2 * reach + 1;
    let mut components = 0usize;
    for idx in 0..side.pow(n as u32) {
        let mut rest = idx;
        let mut norm = 0i64;
        for _ in 0..n {
            let c = rest % side - reach;
            rest /= side;
            norm += c * c;
        }
        if norm <= bound {
            components += 1;
        }
    }
    let entries = (0..=n).map(|i| (i as i64, HomologyGroup::free(components * binomial(n, i)))).collect();
    HomologyTable {
        label: "H_*(sublevel)".to_string(),
        grading: Grading::Homological,
        coefficients: Coefficients::Integers,
        entries,
    }
}

/// Morse–Witten complex of the perturbed energy on `Λ_k S¹` over `Z/2`:
/// `CM_0 = Z2<γ^+>`, `CM_1 = Z2<γ^->`, boundary = orbit count mod 2.
pub fn morse_witten_complex_perturbed(k: i64, orbit_count: Option<u64>) -> Result<ChainComplex, HomologyError> {
    if k == 0 {
        return Err(HomologyError::ZeroWinding);
    }
    let count = orbit_count.ok_or(HomologyError::MissingOrbitCount)?;
    let mut boundary = IntMatrix::zeros(1, 1);
    boundary.set(0, 0, BigInt::from(count % 2));
    ChainComplex::new(Coefficients::Mod2, 0, alloc::vec![1, 1], alloc::vec![IntMatrix::zeros(0, 1), boundary])
}
