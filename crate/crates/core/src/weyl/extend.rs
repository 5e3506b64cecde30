//! Extension of a fractal function on an alcove to all of ℝⁿ by folding.

use super::action::AffineWeylAction;
use crate::error::{Error, Result};
use crate::fractal::{Evaluation, FractalFunction};
use crate::linalg;

/// `f̄(x) = f(fold(x))` for a function whose domain is the alcove of `weyl`.
#[derive(Debug, Clone)]
pub struct ExtendedFunction<'a> {
    pub f: &'a FractalFunction,
    pub weyl: &'a AffineWeylAction,
}

impl<'a> ExtendedFunction<'a> {
    pub fn new(f: &'a FractalFunction, weyl: &'a AffineWeylAction) -> Result<Self> {
        let parent = f.ctx().scheme.parent.vertices();
        let alcove = &weyl.alcove.vertices;
        let tol = f.ctx().scheme.tol();
        let same = parent.len() == alcove.len()
            && parent.iter().all(|p| alcove.iter().any(|q| linalg::dist(p, q) <= tol));
        if !same {
            return Err(Error::InvalidInput("function domain is not the alcove of the action".into()));
        }
        Ok(ExtendedFunction { f, weyl })
    }

    pub fn eval(&self, x: &[f64], tol: f64) -> Result<Evaluation> {
        let (rep, _) = self.weyl.fold(x)?;
        self.f.evaluate_to(&rep, tol)
    }
}

/// Evaluates the folded extension of `f` at `x`.
pub fn extend_function(f: &FractalFunction, weyl: &AffineWeylAction, x: &[f64], tol: f64) -> Result<Evaluation> {
    ExtendedFunction::new(f, weyl)?.eval(x, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fractal::{fix_point, lambdas_of, FixPointConfig, RbOperator, ScaleVector, SchemeContext};
    use crate::weyl::rank2_catalog;

    #[test]
    fn identity_function_on_a1() {
        let a1 = rank2_catalog("A1").unwrap();
        let scheme = crate::partition::fixtures::interval_halves();
        let ctx = SchemeContext::new(scheme).unwrap();
        let scales = ScaleVector::uniform(2, 0.5);
        let lambdas = lambdas_of(&ctx, &scales, |x| Ok(x[0])).unwrap();
        let f = fix_point(RbOperator::new(ctx, lambdas, scales).unwrap(), &FixPointConfig::default()).unwrap();
        let e = extend_function(&f, &a1, &[1.25], 1e-12).unwrap();
        assert!((e.value - 0.75).abs() <= 1e-12 + e.bound);
        let inside = extend_function(&f, &a1, &[0.3], 1e-12).unwrap();
        assert!((inside.value - 0.3).abs() <= 1e-12 + inside.bound);
    }
}
