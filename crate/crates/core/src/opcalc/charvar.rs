use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;
use std::io::Write;

use super::poly::{principal_symbol, DiffOp, MultiPoly};
use crate::error::{Error, Result};
use crate::geometry::{dot, ClosedConicSet};

/// A polynomial with coefficients converted to doubles once.
struct NumPoly {
    terms: Vec<(Vec<u32>, C64)>,
    scale: f64,
}

impl NumPoly {
    fn new(p: &MultiPoly) -> Self {
        let terms: Vec<(Vec<u32>, C64)> = p.terms.iter().map(|(e, c)| (e.clone(), c.to_c64())).collect();
        let scale = terms.iter().map(|t| t.1.norm()).sum::<f64>().max(f64::MIN_POSITIVE);
        NumPoly { terms, scale }
    }

    /// |p(ζ)| / Σ|c_α|.
    fn rel(&self, z: &[C64]) -> f64 {
        let v: C64 = self
            .terms
            .iter()
            .map(|(e, c)| e.iter().zip(z).fold(*c, |acc, (k, w)| acc * w.powu(*k)))
            .sum();
        v.norm() / self.scale
    }
}

/// Point of S^{2n−1} from moduli angles η₁..η_{n−1} ∈ [0, π/2] and phases.
/// With `reduced`, the first phase is fixed to 0.
fn sphere_point(n: usize, params: &[f64], reduced: bool) -> Vec<C64> {
    let (eta, phases) = params.split_at(n - 1);
    let mut r = vec![1.0; n];
    let mut s = 1.0;
    for k in 0..n {
        if k < n - 1 {
            r[k] = s * eta[k].cos();
            s *= eta[k].sin();
        } else {
            r[k] = s;
        }
    }
    (0..n)
        .map(|k| {
            let ph = if reduced {
                if k == 0 {
                    0.0
                } else {
                    phases[k - 1]
                }
            } else {
                phases[k]
            };
            C64::from_polar(r[k], ph)
        })
        .collect()
}

fn sphere_grid(n: usize, mesh: f64, reduced: bool) -> Vec<Vec<f64>> {
    let m_eta = ((PI / 2.0) / mesh).ceil() as usize;
    let m_ph = ((2.0 * PI) / mesh).ceil() as usize;
    let n_ph = if reduced { n - 1 } else { n };
    let mut axes: Vec<Vec<f64>> = vec![];
    for _ in 0..n - 1 {
        axes.push((0..=m_eta).map(|j| (PI / 2.0) * j as f64 / m_eta as f64).collect());
    }
    for _ in 0..n_ph {
        axes.push((0..m_ph).map(|j| 2.0 * PI * j as f64 / m_ph as f64).collect());
    }
    let mut out: Vec<Vec<f64>> = vec![vec![]];
    for ax in &axes {
        out = out.into_iter().flat_map(|p| ax.iter().map(move |x| [p.clone(), vec![*x]].concat())).collect();
    }
    out
}

/// Fubini-Study distance between the complex lines through a and b.
pub fn projective_distance(a: &[C64], b: &[C64]) -> f64 {
    let ip: C64 = a.iter().zip(b).map(|(x, y)| x.conj() * y).sum();
    let na: f64 = a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    let nb: f64 = b.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    (ip.norm() / (na * nb)).min(1.0).acos()
}

#[derive(Debug, Clone, Serialize)]
pub struct CharSample {
    pub zeta: Vec<C64>,
    /// max over generators of |σ(P_i)(ζ)| / Σ|coefficients of σ(P_i)|;
    /// small exactly when every symbol nearly vanishes.
    pub joint_rel: f64,
    pub flagged: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CharReport {
    pub n: usize,
    pub mesh: f64,
    pub tol: f64,
    pub samples: Vec<CharSample>,
}

impl CharReport {
    pub fn flagged(&self) -> impl Iterator<Item = &CharSample> {
        self.samples.iter().filter(|s| s.flagged)
    }

    /// CSV with columns zeta<k>_re, zeta<k>_im, sigma_rel, flagged.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        let io = |e: csv::Error| Error::Invalid(format!("csv: {e}"));
        let mut head: Vec<String> = (1..=self.n).flat_map(|k| [format!("zeta{k}_re"), format!("zeta{k}_im")]).collect();
        head.push("sigma_rel".into());
        head.push("flagged".into());
        wr.write_record(&head).map_err(io)?;
        for s in &self.samples {
            let mut row: Vec<String> = s.zeta.iter().flat_map(|z| [z.re.to_string(), z.im.to_string()]).collect();
            row.push(format!("{:e}", s.joint_rel));
            row.push(s.flagged.to_string());
            wr.write_record(&row).map_err(io)?;
        }
        wr.flush().map_err(|e| Error::Invalid(format!("csv: {e}")))?;
        Ok(())
    }
}

/// Scans the sphere for directions where all principal symbols nearly
/// vanish. Each σ(P_i) is homogeneous, so |σ(P_i)| is constant on complex
/// lines and the scan runs over one representative per line (first phase
/// fixed). `tol` defaults to the mesh.
pub fn char_infinity(gens: &[DiffOp], mesh: f64, tol: Option<f64>) -> Result<CharReport> {
    if gens.is_empty() {
        return Err(Error::Invalid("no generators".into()));
    }
    if !(mesh > 0.0) {
        return Err(Error::Invalid("grid mesh must be positive".into()));
    }
    let n = gens.iter().map(|g| g.dim()).max().unwrap();
    let syms: Vec<NumPoly> = gens.iter().map(|g| principal_symbol(g).map(|s| NumPoly::new(&s.widen(n)))).collect::<Result<_>>()?;
    let tol = tol.unwrap_or(mesh);
    let samples = sphere_grid(n, mesh, true)
        .into_par_iter()
        .map(|p| {
            let zeta = sphere_point(n, &p, true);
            let joint_rel = syms.iter().map(|s| s.rel(&zeta)).fold(0.0, f64::max);
            CharSample { zeta, joint_rel, flagged: joint_rel < tol }
        })
        .collect();
    Ok(CharReport { n, mesh, tol, samples })
}

#[derive(Debug, Clone, Copy)]
pub struct SolvableOptions {
    pub mesh: f64,
    /// Directions are kept when ⟨g, Re ζ⟩ ≥ depth·|ζ| for every unit
    /// generator g of the cone of K.
    pub depth: f64,
    pub margin: f64,
}

impl Default for SolvableOptions {
    fn default() -> Self {
        SolvableOptions { mesh: 0.05, depth: 0.05, margin: 1e-3 }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SolvabilityReport {
    pub solvable: bool,
    /// Smallest |σ(P)(ζ)| / Σ|coefficients| found on the HPC grid after
    /// local refinement.
    pub min_rel: f64,
    pub worst: Vec<C64>,
    pub samples: usize,
    pub mesh: f64,
    pub depth: f64,
    pub margin: f64,
}

/// Grid verdict for σ(P) ≠ 0 on HPC{K}: minimizes |σ(P)| over the unit
/// directions whose real part lies at least `depth` inside the dual cone,
/// polishing the best grid points by compass search. The verdict is a
/// margin statement, not a proof.
pub fn check_solvable(p: &DiffOp, k: &ClosedConicSet, opts: &SolvableOptions) -> Result<SolvabilityReport> {
    let n = p.dim().max(k.dim());
    if k.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, got: k.dim() });
    }
    if !k.cone.is_proper() {
        return Err(Error::EmptyHpc);
    }
    let sym = NumPoly::new(&principal_symbol(p)?.widen(n));
    let gens: Vec<Vec<f64>> = k
        .cone
        .generators
        .iter()
        .map(|g| {
            let s = dot(g, g).sqrt();
            g.iter().map(|x| x / s).collect()
        })
        .collect();
    let inside = |z: &[C64]| -> bool {
        let re: Vec<f64> = z.iter().map(|w| w.re).collect();
        gens.iter().all(|g| dot(g, &re) >= opts.depth)
    };
    let grid = sphere_grid(n, opts.mesh, false);
    let mut vals: Vec<(f64, Vec<f64>)> = grid
        .into_par_iter()
        .filter_map(|pr| {
            let z = sphere_point(n, &pr, false);
            inside(&z).then(|| (sym.rel(&z), pr))
        })
        .collect();
    if vals.is_empty() {
        return Err(Error::EmptyHpc);
    }
    let samples = vals.len();
    vals.sort_by(|a, b| a.0.total_cmp(&b.0));
    let f = |pr: &[f64]| -> f64 {
        let z = sphere_point(n, pr, false);
        if inside(&z) {
            sym.rel(&z)
        } else {
            f64::INFINITY
        }
    };
    let (best, arg) = vals
        .iter()
        .take(8)
        .map(|(v, pr)| compass_search(&f, pr.clone(), *v, opts.mesh))
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .unwrap();
    Ok(SolvabilityReport {
        solvable: best > opts.margin,
        min_rel: best,
        worst: sphere_point(n, &arg, false),
        samples,
        mesh: opts.mesh,
        depth: opts.depth,
        margin: opts.margin,
    })
}

fn compass_search(f: &dyn Fn(&[f64]) -> f64, mut x: Vec<f64>, mut fx: f64, mut step: f64) -> (f64, Vec<f64>) {
    while step > 1e-12 && fx > 0.0 {
        let mut moved = false;
        for k in 0..x.len() {
            for s in [step, -step] {
                let mut y = x.clone();
                y[k] += s;
                let fy = f(&y);
                if fy < fx {
                    x = y;
                    fx = fy;
                    moved = true;
                }
            }
        }
        if !moved {
            step *= 0.5;
        }
    }
    (fx, x)
}
