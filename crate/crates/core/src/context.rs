//! The computational context shared by every higher-level operation.

use std::sync::Arc;

use crate::algebra::{build_algebra_to, GradedAlgebra, Presentation};
use crate::error::{Error, Result};
use crate::linalg::Field;
use crate::module::{shapes_of, GradedModule};
use crate::strat::StratOrder;

/// An algebra with its opposite, a stratification order, the module horizon
/// `N` and the homological depth `L`.
///
/// Modules are stored in degrees up to `N`; the path algebra itself is built
/// deeper so that projectives generated in negative degrees stay exact up to
/// the horizon.
#[derive(Clone, Debug)]
pub struct Context {
    pub alg: Arc<GradedAlgebra>,
    pub op: Arc<GradedAlgebra>,
    pub order: StratOrder,
    pub horizon: i64,
    pub depth: usize,
}

impl Context {
    /// Builds the context; the horizon is the presentation's truncation.
    pub fn new(p: &Presentation, order: StratOrder, depth: usize) -> Result<Context> {
        if order.nverts() != p.quiver.vertices.len() {
            return Err(Error::Usage("order does not match the vertex set".into()));
        }
        if depth == 0 {
            return Err(Error::Usage("homological depth must be at least 1".into()));
        }
        let n = p.truncation;
        let internal = 2 * n + 4;
        let alg = build_algebra_to(p, internal)?;
        let op = build_algebra_to(&p.opposite(), internal)?;
        Ok(Context { alg: Arc::new(alg), op: Arc::new(op), order, horizon: n as i64, depth })
    }

    /// The same data over the opposite algebra (the order is unchanged).
    pub fn opposite(&self) -> Context {
        Context { alg: self.op.clone(), op: self.alg.clone(), order: self.order.clone(), horizon: self.horizon, depth: self.depth }
    }

    pub fn presentation(&self) -> &Presentation {
        &self.alg.presentation
    }

    pub fn field(&self) -> Field {
        self.alg.field()
    }

    pub fn nverts(&self) -> usize {
        self.alg.nverts()
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.alg.quiver().vertices[v]
    }

    pub fn zero_module(&self) -> GradedModule {
        GradedModule::zero(self.field(), self.nverts(), shapes_of(self.presentation()))
    }

    /// Lowest degree in which the engine places generators.
    pub fn floor(&self) -> i64 {
        -self.horizon - 2
    }
}
