//! Structural description of the seven-factor factorization of F̂₈ and its
//! exact verification.
//!
//! The plan lists the factors in product order (`P` first, `B8` last). Every
//! factor is a permutation, a block-diagonal of signed butterflies, or a
//! diagonal with entries in `{1, j, 1/2}`, so each one has an exact matrix
//! and a multiplication-free action.

use std::fmt;

use crate::dyadic::DyadicGaussian;
use crate::error::{Error, Result};
use crate::kernel::OUTPUT_ORDER;
use crate::matrix::{approx_matrix, Square, TransformMatrix, N};
use crate::scalar::Multiplierless;

/// A square block on the diagonal of a block-diagonal stage.
#[derive(Clone, Debug, PartialEq)]
pub enum Block {
    Identity(usize),
    /// `[[1, 1], [1, -1]] ⊗ I_{n/2}`.
    Butterfly(usize),
    /// Dense block with entries in `{-1, 0, 1}`, row-major.
    Signed(Vec<Vec<i8>>),
}

impl Block {
    fn size(&self) -> usize {
        match self {
            Block::Identity(n) | Block::Butterfly(n) => *n,
            Block::Signed(rows) => rows.len(),
        }
    }

    fn signed_rows(&self) -> Vec<Vec<i8>> {
        match self {
            Block::Identity(n) => (0..*n)
                .map(|i| (0..*n).map(|k| i8::from(i == k)).collect())
                .collect(),
            Block::Butterfly(n) => {
                let h = n / 2;
                (0..*n)
                    .map(|i| {
                        (0..*n)
                            .map(|k| match (i < h, k < h) {
                                _ if i % h != k % h => 0,
                                (false, false) => -1,
                                _ => 1,
                            })
                            .collect()
                    })
                    .collect()
            }
            Block::Signed(rows) => rows.clone(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiagEntry {
    One,
    J,
    Half,
}

impl DiagEntry {
    fn value(self) -> DyadicGaussian {
        match self {
            DiagEntry::One => DyadicGaussian::ONE,
            DiagEntry::J => DyadicGaussian::J,
            DiagEntry::Half => DyadicGaussian::new(1, 0, 1),
        }
    }

    fn apply<S: Multiplierless>(self, x: S) -> S {
        match self {
            DiagEntry::One => x,
            DiagEntry::J => x.mul_j(),
            DiagEntry::Half => x.halve(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Stage {
    /// Row `r` of the matrix is `e_{perm[r]}ᵀ`.
    Permutation([usize; N]),
    BlockDiagonal(Vec<Block>),
    Diagonal([DiagEntry; N]),
}

impl Stage {
    pub fn identity() -> Self {
        Stage::Permutation(std::array::from_fn(|i| i))
    }

    pub fn matrix(&self) -> TransformMatrix {
        let mut m: Square<DyadicGaussian> = [[DyadicGaussian::ZERO; N]; N];
        match self {
            Stage::Permutation(perm) => {
                for (r, &c) in perm.iter().enumerate() {
                    m[r][c] = DyadicGaussian::ONE;
                }
            }
            Stage::Diagonal(d) => {
                for (i, e) in d.iter().enumerate() {
                    m[i][i] = e.value();
                }
            }
            Stage::BlockDiagonal(blocks) => {
                let mut off = 0;
                for b in blocks {
                    for (i, row) in b.signed_rows().iter().enumerate() {
                        for (k, &s) in row.iter().enumerate() {
                            m[off + i][off + k] = DyadicGaussian::from_int(s.into(), 0);
                        }
                    }
                    off += b.size();
                }
                assert_eq!(off, N, "blocks must tile the 8x8 stage");
            }
        }
        TransformMatrix::from_exact(m)
    }

    /// Applies the stage without multiplications.
    pub fn apply<S: Multiplierless>(&self, v: [S; N]) -> [S; N] {
        match self {
            Stage::Permutation(perm) => std::array::from_fn(|r| v[perm[r]].clone()),
            Stage::Diagonal(d) => {
                let mut i = 0;
                v.map(|x| {
                    let y = d[i].apply(x);
                    i += 1;
                    y
                })
            }
            Stage::BlockDiagonal(blocks) => {
                let mut out: Vec<S> = Vec::with_capacity(N);
                let mut off = 0;
                for b in blocks {
                    for row in b.signed_rows() {
                        out.push(signed_sum(&v[off..off + row.len()], &row));
                    }
                    off += b.size();
                }
                out.try_into().unwrap_or_else(|_| panic!("blocks must tile the 8x8 stage"))
            }
        }
    }
}

/// `Σ sign_k · x_k`, starting from a positive term so that a leading
/// negation is only needed when every term is negative.
fn signed_sum<S: Multiplierless>(x: &[S], signs: &[i8]) -> S {
    let terms: Vec<(i8, &S)> = signs.iter().copied().zip(x).filter(|(s, _)| *s != 0).collect();
    let lead = terms.iter().position(|(s, _)| *s > 0).unwrap_or(0);
    let (s0, x0) = terms[lead];
    let mut acc = if s0 > 0 { x0.clone() } else { -x0.clone() };
    for (i, &(s, x)) in terms.iter().enumerate() {
        if i == lead {
            continue;
        }
        acc = if s > 0 { acc + x.clone() } else { acc - x.clone() };
    }
    acc
}

#[derive(Clone, Debug, PartialEq)]
pub struct NamedStage {
    pub name: &'static str,
    pub stage: Stage,
}

/// Ordered factors of a transform, in product order.
#[derive(Clone, Debug, PartialEq)]
pub struct StagePlan {
    pub stages: Vec<NamedStage>,
}

impl StagePlan {
    /// `P · diag(I2,A1,A3) · D2 · diag(B2,I2,A4) · D1 · diag(B4,A2) · B8`.
    pub fn approx_dft8() -> Self {
        let a1 = vec![vec![1, -1], vec![1, 1]];
        let a2 = vec![
            vec![1, 0, 0, 0],
            vec![0, 1, 0, 1],
            vec![0, 0, 1, 0],
            vec![0, 1, 0, -1],
        ];
        let a3 = vec![
            vec![1, -1, 0, 0],
            vec![0, 0, -1, 1],
            vec![1, 1, 0, 0],
            vec![0, 0, 1, 1],
        ];
        let a4 = vec![
            vec![1, 0, 0, 1],
            vec![0, 1, 1, 0],
            vec![0, 1, -1, 0],
            vec![1, 0, 0, -1],
        ];
        use DiagEntry::{Half, J, One};
        let stage = |name, stage| NamedStage { name, stage };
        Self {
            stages: vec![
                stage("P", Stage::Permutation(OUTPUT_ORDER)),
                stage(
                    "diag(I2,A1,A3)",
                    Stage::BlockDiagonal(vec![Block::Identity(2), Block::Signed(a1), Block::Signed(a3)]),
                ),
                stage("D2", Stage::Diagonal([One, One, One, J, One, J, J, One])),
                stage(
                    "diag(B2,I2,A4)",
                    Stage::BlockDiagonal(vec![Block::Butterfly(2), Block::Identity(2), Block::Signed(a4)]),
                ),
                stage("D1", Stage::Diagonal([One, One, One, One, One, Half, One, Half])),
                stage("diag(B4,A2)", Stage::BlockDiagonal(vec![Block::Butterfly(4), Block::Signed(a2)])),
                stage("B8", Stage::BlockDiagonal(vec![Block::Butterfly(8)])),
            ],
        }
    }

    pub fn stage(&self, name: &str) -> Option<&Stage> {
        self.stages.iter().find(|s| s.name == name).map(|s| &s.stage)
    }

    /// A copy of the plan with the named stage removed.
    pub fn without(&self, name: &str) -> Self {
        Self { stages: self.stages.iter().filter(|s| s.name != name).cloned().collect() }
    }

    /// A copy of the plan with the named stage swapped for `stage`.
    pub fn replacing(&self, name: &str, stage: Stage) -> Self {
        let mut plan = self.clone();
        for s in plan.stages.iter_mut().filter(|s| s.name == name) {
            s.stage = stage.clone();
        }
        plan
    }

    /// Exact product of all stage matrices.
    pub fn product(&self) -> TransformMatrix {
        self.stages
            .iter()
            .map(|s| s.stage.matrix())
            .reduce(|acc, m| acc.matmul(&m))
            .unwrap_or_else(|| Stage::identity().matrix())
    }

    /// Applies the stages right to left.
    pub fn apply<S: Multiplierless>(&self, v: [S; N]) -> [S; N] {
        self.stages.iter().rev().fold(v, |acc, s| s.stage.apply(acc))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub row: usize,
    pub col: usize,
    pub expected: DyadicGaussian,
    pub got: DyadicGaussian,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}): expected {}, got {}", self.row, self.col, self.expected, self.got)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorizationReport {
    pub stage_count: usize,
    pub mismatches: Vec<Mismatch>,
}

impl FactorizationReport {
    pub fn is_exact(&self) -> bool {
        self.mismatches.is_empty()
    }

    pub fn mismatched_rows(&self) -> Vec<usize> {
        let mut rows: Vec<usize> = self.mismatches.iter().map(|m| m.row).collect();
        rows.dedup();
        rows
    }

    pub fn into_result(self) -> Result<Self> {
        match self.mismatches.first() {
            None => Ok(self),
            Some(m) => Err(Error::FactorizationMismatch {
                row: m.row,
                col: m.col,
                expected: m.expected.to_string(),
                got: m.got.to_string(),
            }),
        }
    }
}

/// Multiplies the plan's stages over exact arithmetic and compares the
/// product with F̂₈ entry by entry.
pub fn verify_plan(plan: &StagePlan) -> FactorizationReport {
    let expected = approx_matrix();
    let got = plan.product();
    let (e, g) = (expected.exact().expect("exact"), got.exact().expect("exact"));
    let mismatches = (0..N)
        .flat_map(|row| (0..N).map(move |col| (row, col)))
        .filter(|&(r, c)| e[r][c] != g[r][c])
        .map(|(row, col)| Mismatch { row, col, expected: e[row][col], got: g[row][col] })
        .collect();
    FactorizationReport { stage_count: plan.stages.len(), mismatches }
}

pub fn verify_factorization() -> FactorizationReport {
    verify_plan(&StagePlan::approx_dft8())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::fast_transform;

    #[test]
    fn factorization_is_exact() {
        let report = verify_factorization();
        assert_eq!(report.stage_count, 7);
        assert!(report.is_exact(), "{:?}", report.mismatches);
        assert!(report.into_result().is_ok());
    }

    #[test]
    fn dropping_d1_breaks_odd_rows_and_columns() {
        let report = verify_plan(&StagePlan::approx_dft8().without("D1"));
        let mut cells: Vec<(usize, usize)> =
            report.mismatches.iter().map(|m| (m.row, m.col)).collect();
        cells.sort();
        let want: Vec<(usize, usize)> = (1..N)
            .step_by(2)
            .flat_map(|r| (1..N).step_by(2).map(move |c| (r, c)))
            .collect();
        assert_eq!(cells, want);
        // each of those entries comes out doubled
        for m in &report.mismatches {
            assert_eq!(m.got, m.expected + m.expected);
        }
    }

    #[test]
    fn identity_permutation_names_six_rows() {
        let report = verify_plan(&StagePlan::approx_dft8().replacing("P", Stage::identity()));
        assert_eq!(report.mismatched_rows(), vec![1, 3, 4, 5, 6, 7]);
        let err = report.into_result().unwrap_err();
        assert!(matches!(err, Error::FactorizationMismatch { row: 1, col: 1, .. }), "{err}");
    }

    #[test]
    fn diagonal_stages_use_allowed_values() {
        let plan = StagePlan::approx_dft8();
        let Some(Stage::Diagonal(d1)) = plan.stage("D1") else { panic!("D1 missing") };
        let Some(Stage::Diagonal(d2)) = plan.stage("D2") else { panic!("D2 missing") };
        assert!(d1.iter().all(|e| matches!(e, DiagEntry::One | DiagEntry::Half)));
        assert!(d2.iter().all(|e| matches!(e, DiagEntry::One | DiagEntry::J)));
    }

    #[test]
    fn stage_actions_match_stage_matrices() {
        for s in &StagePlan::approx_dft8().stages {
            let m = s.stage.matrix();
            for k in 0..N {
                let mut e = [DyadicGaussian::ZERO; N];
                e[k] = DyadicGaussian::ONE;
                let col = s.stage.apply(e);
                for (i, &z) in col.iter().enumerate() {
                    assert_eq!(Some(z), m.exact_entry(i, k), "{} ({i},{k})", s.name);
                }
            }
        }
    }

    #[test]
    fn straight_line_kernel_matches_plan() {
        let plan = StagePlan::approx_dft8();
        let v: [DyadicGaussian; N] =
            std::array::from_fn(|n| DyadicGaussian::new(n as i64 * 3 - 7, 5 - n as i64, (n % 3) as u32));
        assert_eq!(fast_transform(v), plan.apply(v));
    }
}
