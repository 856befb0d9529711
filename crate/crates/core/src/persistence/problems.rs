use serde::Serialize;

use crate::error::{Result, UmatchError};
use crate::linalg::{solve_dx_b, Solve};
use crate::matrix::sub;

use super::{Chain, PersistenceEngine};

/// Outcome of the earliest bounding chain problem.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum Bounding {
    /// `x = ∂ witness`, and no chain born earlier bounds `x`. `index` is the
    /// global index of the latest cell of the witness (`None` when `x = 0`).
    Bounds {
        index: Option<usize>,
        value: f64,
        witness: Chain,
    },
    NeverBounds,
}

/// Half-open interval `[birth, death)` of filtration values; `death = None`
/// means the cycle never bounds.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Lifespan {
    pub birth: f64,
    pub death: Option<f64>,
}

impl PersistenceEngine {
    fn require_cycle(&self, x: &Chain) -> Result<()> {
        if !self.is_cycle(x)? {
            return Err(UmatchError::Usage(format!(
                "the {}-chain is not a cycle",
                x.dim
            )));
        }
        Ok(())
    }

    /// Earliest filtration step at which the cycle `x` becomes a boundary,
    /// with a bounding chain born at that step.
    pub fn bounding_chain(&self, x: &Chain) -> Result<Bounding> {
        self.require_cycle(x)?;
        let n = x.dim;
        if x.is_zero() {
            return Ok(Bounding::Bounds {
                index: None,
                value: f64::NEG_INFINITY,
                witness: Chain::zero(n + 1),
            });
        }
        if n + 1 > self.complex.top_dim() {
            return Ok(Bounding::NeverBounds);
        }
        let u = self.decomposition(n + 1)?;
        Ok(match solve_dx_b(u, &x.vector)? {
            Solve::Solution(y) => {
                let last = y.max_index().expect("nonzero preimage of a nonzero cycle");
                Bounding::Bounds {
                    index: Some(self.global_of[n + 1][last]),
                    value: self.complex.birth(n + 1, last),
                    witness: Chain::new(n + 1, y),
                }
            }
            Solve::NoSolution => Bounding::NeverBounds,
        })
    }

    /// First filtration value at which `x` and `f` both exist and are
    /// homologous; `None` if they never become homologous.
    pub fn time_of_homology(&self, x: &Chain, f: &Chain) -> Result<Option<f64>> {
        if x.dim != f.dim {
            return Err(UmatchError::Usage(format!(
                "chains have different dimensions {} and {}",
                x.dim, f.dim
            )));
        }
        self.require_cycle(x)?;
        self.require_cycle(f)?;
        let diff = Chain::new(x.dim, sub(self.complex.field(), &x.vector, &f.vector));
        let birth = |c: &Chain| self.chain_birth(c).map_or(f64::NEG_INFINITY, |b| b.1);
        Ok(match self.bounding_chain(&diff)? {
            Bounding::Bounds { value, .. } => Some(birth(x).max(birth(f)).max(value)),
            Bounding::NeverBounds => None,
        })
    }

    /// `[birth(x), time x first bounds)`.
    pub fn lifespan(&self, x: &Chain) -> Result<Lifespan> {
        self.require_cycle(x)?;
        let Some((_, birth)) = self.chain_birth(x) else {
            return Err(UmatchError::Usage("the zero chain has no lifespan".into()));
        };
        Ok(Lifespan {
            birth,
            death: match self.bounding_chain(x)? {
                Bounding::Bounds { value, .. } => Some(value.max(birth)),
                Bounding::NeverBounds => None,
            },
        })
    }
}
