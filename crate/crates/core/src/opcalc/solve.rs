use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;
use std::any::Any;
use std::fmt;
use std::sync::Arc;

use super::charvar::{check_solvable, SolvabilityReport, SolvableOptions};
use super::poly::DiffOp;
use crate::chains::{make_inverse_chain, InverseChain, Profile};
use crate::error::{Error, Result};
use crate::expr::{AnalyticFunction, GrowthCertificate, NumericFn, WedgeDescriptor};
use crate::geometry::ClosedConicSet;
use crate::hyperfun::{pairing, Hyperfunction, TestDensity};
use crate::laplace::{axis_supports, inverse, TransformResult};
use crate::literal::to_json;

#[derive(Debug, Clone, Copy)]
pub struct SolveOptions {
    /// Chain profile; None places ψ(0) one unit right of every root of P and
    /// of the growth type of f.
    pub profile: Option<Profile>,
    /// Required distance from the chain to the roots of P.
    pub margin: f64,
    pub solvability: SolvableOptions,
    /// Compute residual pairings of P(∂)u − f on the battery.
    pub verify: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { profile: None, margin: 0.5, solvability: SolvableOptions::default(), verify: true }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Residual {
    pub density: usize,
    pub value: C64,
}

#[derive(Debug, Clone)]
pub struct Solution {
    pub u: Hyperfunction,
    pub chain: Option<InverseChain>,
    pub roots: Vec<C64>,
    pub solvability: SolvabilityReport,
    pub residuals: Vec<Residual>,
}

impl Solution {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().map(|r| r.value.norm()).fold(0.0, f64::max)
    }
}

/// 𝓛(f)(ζ)/P(ζ) for one-variable P; evaluation failures become NaN.
pub fn transform_quotient(f: &Hyperfunction, p: &DiffOp) -> AnalyticFunction {
    let poly = p.0.terms.iter().map(|(e, c)| (e[0], c.to_c64())).collect();
    AnalyticFunction::numeric(
        Arc::new(TransformQuotient { t: TransformResult::new(f), p: p.clone(), poly }),
        WedgeDescriptor::full(1),
        GrowthCertificate::bounded(),
    )
}

struct TransformQuotient {
    t: TransformResult,
    p: DiffOp,
    poly: Vec<(u32, C64)>,
}

impl fmt::Debug for TransformQuotient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TransformQuotient(P = {})", self.p)
    }
}

impl NumericFn for TransformQuotient {
    fn dim(&self) -> usize {
        1
    }

    fn eval(&self, z: &[C64]) -> C64 {
        let pz: C64 = self.poly.iter().map(|(k, c)| c * z[0].powu(*k)).sum();
        match self.t.eval(z) {
            Ok(v) => v / pz,
            Err(_) => C64::new(f64::NAN, f64::NAN),
        }
    }

    fn describe(&self) -> serde_json::Value {
        let u = to_json(&self.t.source).unwrap_or(serde_json::Value::Null);
        json!({ "transform_quotient": { "u": u, "P": self.p.to_string() } })
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}

/// ⟨P(∂)u − f, φ⟩ = Σ_k c_k (−1)^k ⟨u, φ^{(k)}⟩ − ⟨f, φ⟩.
pub fn residual_pairing(p: &DiffOp, u: &Hyperfunction, f: &Hyperfunction, phi: &TestDensity) -> Result<C64> {
    let mut acc = -pairing(f, phi)?;
    for (e, c) in &p.0.terms {
        let k = e[0] as usize;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        acc += c.to_c64() * sign * pairing(u, &phi.derivative_n(0, k))?;
    }
    Ok(acc)
}

/// u = I𝓛(𝓛(f)/P) for one variable, with supp f ⊂ K and K a half-line.
pub fn solve(p: &DiffOp, f: &Hyperfunction, k: &ClosedConicSet, opts: &SolveOptions) -> Result<Solution> {
    if f.dim != 1 || p.dim() != 1 || k.dim() != 1 {
        return Err(Error::Unsupported("solve is implemented for one variable".into()));
    }
    if p.0.is_zero() {
        return Err(Error::ZeroOperator);
    }
    if !f.is_zero_literal() {
        let (lo, hi) = f.support.interval()?;
        let (klo, khi) = k.interval()?;
        if lo < klo || hi > khi {
            return Err(Error::Invalid(format!("support [{lo}, {hi}] of f is not inside K = [{klo}, {khi}]")));
        }
    }
    let solvability = check_solvable(p, k, &opts.solvability)?;
    if !solvability.solvable {
        return Err(Error::SolvabilityFail(format!(
            "|σ(P)| drops to {:.3e} on HPC{{K}} at ζ = {:?}",
            solvability.min_rel, solvability.worst
        )));
    }
    let roots = p.0.roots_1d()?;
    let mut sol = Solution { u: Hyperfunction::zero(1), chain: None, roots: roots.clone(), solvability, residuals: vec![] };
    if p.order() == 0 {
        let c = p.0.coeff(&[0]);
        sol.u = f.scale(C64::new(1.0, 0.0) / c.to_c64());
    } else if !f.is_zero_literal() {
        let (_, d) = axis_supports(k)?[0];
        if d == 0.0 {
            return Err(Error::Unsupported("K must be a half-line".into()));
        }
        let psi = match opts.profile {
            Some(psi) => psi,
            None => {
                let right = roots.iter().map(|r| d * r.re).fold(f64::NEG_INFINITY, f64::max);
                let c0 = right.max(f.growth_type()).max(0.0);
                Profile::new(c0, 1.0, 0.5)?
            }
        };
        for r in &roots {
            if d * r.re >= psi.psi(r.im.abs()) {
                return Err(Error::PoleOnChain(format!("root {r} lies on the far side of the chain")));
            }
        }
        let chain = make_inverse_chain(&[d], psi, &roots, opts.margin).map_err(|e| match e {
            Error::MarginViolation { distance, margin } => {
                Error::PoleOnChain(format!("chain passes within {distance:.3e} of a root of P (margin {margin})"))
            }
            e => e,
        })?;
        let quotient = transform_quotient(f, p);
        sol.u = inverse(&quotient, k, &chain)?;
        sol.chain = Some(chain);
    }
    if opts.verify {
        sol.residuals = TestDensity::battery_1d()
            .par_iter()
            .enumerate()
            .map(|(j, phi)| residual_pairing(p, &sol.u, f, phi).map(|value| Residual { density: j, value }))
            .collect::<Result<_>>()?;
    }
    Ok(sol)
}
