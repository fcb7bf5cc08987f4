//! Floating-point Wigner transforms of pure states and the checks built on
//! them: normalisation, purity, marginals and the two readings of the
//! quantisation rule `p → −iħ∂/∂q` on a Wigner function.
//!
//! Convention: `ρ(p,q) = (1/2π)∫ψ*(q − ħs/2) e^{−ips} ψ(q + ħs/2) ds`.
//! The `s` step is tied to the `q` step by `ħ ds/2 = dq`, so every sample
//! of the integrand sits on the wave-function grid.

use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;
use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Amplitude below which a wave function counts as decayed.
pub const BOUNDARY_TOLERANCE: f64 = 1e-10;

/// Normalised eigenfunction of `H = (p² + q²)/2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HermiteState {
    pub level: usize,
    pub hbar: f64,
}

impl HermiteState {
    pub fn new(level: usize, hbar: f64) -> Result<Self> {
        if !(hbar > 0.0 && hbar.is_finite()) {
            return Err(Error::InvalidGrid(format!("hbar must be positive, got {hbar}")));
        }
        Ok(HermiteState { level, hbar })
    }

    /// `ψ_0, …, ψ_{level+1}` at `q` via the three-term recurrence.
    fn ladder(&self, q: f64) -> Vec<f64> {
        let x = q / self.hbar.sqrt();
        let mut out = Vec::with_capacity(self.level + 2);
        out.push((PI * self.hbar).powf(-0.25) * (-x * x / 2.0).exp());
        if self.level + 1 >= 1 {
            out.push(2f64.sqrt() * x * out[0]);
        }
        for k in 1..=self.level {
            let kf = k as f64;
            let next = (2.0 / (kf + 1.0)).sqrt() * x * out[k] - (kf / (kf + 1.0)).sqrt() * out[k - 1];
            out.push(next);
        }
        out
    }

    pub fn value(&self, q: f64) -> f64 {
        self.ladder(q)[self.level]
    }

    /// `dψ/dq = ħ^{-1/2}(√(n/2) ψ_{n−1} − √((n+1)/2) ψ_{n+1})`.
    pub fn derivative(&self, q: f64) -> f64 {
        let l = self.ladder(q);
        let n = self.level as f64;
        let down = if self.level > 0 { (n / 2.0).sqrt() * l[self.level - 1] } else { 0.0 };
        (down - ((n + 1.0) / 2.0).sqrt() * l[self.level + 1]) / self.hbar.sqrt()
    }

    /// Closed form `(−1)^n/(πħ) e^{−2E/ħ} L_n(4E/ħ)` with `E = (q² + p²)/2`.
    pub fn wigner(&self, q: f64, p: f64) -> f64 {
        let e = (q * q + p * p) / 2.0;
        let x = 4.0 * e / self.hbar;
        let sign = if self.level.is_multiple_of(2) { 1.0 } else { -1.0 };
        sign / (PI * self.hbar) * (-x / 2.0).exp() * laguerre(self.level, x)
    }

    /// Grid used by the acceptance checks: fine in `q` for the
    /// fourth-order derivative, odd in `p` so that `p = 0` is sampled.
    pub fn default_grid(&self) -> Result<(WaveGrid, MomentumAxis)> {
        let l = self.default_half_width();
        Ok((self.sample(-l, l, 1025)?, MomentumAxis::symmetric(l, 129)))
    }

    /// Half-width of a domain on which the state has decayed below
    /// [`BOUNDARY_TOLERANCE`].
    pub fn default_half_width(&self) -> f64 {
        self.hbar.sqrt() * ((2.0 * self.level as f64 + 1.0).sqrt() + 6.5)
    }

    pub fn sample(&self, q_min: f64, q_max: f64, nq: usize) -> Result<WaveGrid> {
        let grid = WaveGrid::axis(q_min, q_max, nq)?;
        let psi = grid.iter().map(|&q| Complex64::new(self.value(q), 0.0)).collect();
        let dpsi = grid.iter().map(|&q| Complex64::new(self.derivative(q), 0.0)).collect();
        let mut w = WaveGrid::new(q_min, q_max, self.hbar, psi)?;
        w.dpsi = Some(dpsi);
        Ok(w)
    }
}

fn laguerre(n: usize, x: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, 1.0 - x);
    if n == 0 {
        return prev;
    }
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 - x) * cur - kf * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Wave-function samples on a uniform `q` grid.
#[derive(Clone, Debug, PartialEq)]
pub struct WaveGrid {
    pub q_min: f64,
    pub q_max: f64,
    pub hbar: f64,
    pub psi: Vec<Complex64>,
    /// Exact `dψ/dq` when known; finite differences are used otherwise.
    pub dpsi: Option<Vec<Complex64>>,
}

impl WaveGrid {
    fn axis(min: f64, max: f64, n: usize) -> Result<Vec<f64>> {
        if n < 5 || min.is_nan() || max.is_nan() || max <= min {
            return Err(Error::InvalidGrid(format!(
                "need at least 5 points on a nonempty interval, got {n} on [{min}, {max}]"
            )));
        }
        let h = (max - min) / (n - 1) as f64;
        Ok((0..n).map(|i| min + h * i as f64).collect())
    }

    pub fn new(q_min: f64, q_max: f64, hbar: f64, psi: Vec<Complex64>) -> Result<Self> {
        Self::axis(q_min, q_max, psi.len())?;
        if !(hbar > 0.0 && hbar.is_finite()) {
            return Err(Error::InvalidGrid(format!("hbar must be positive, got {hbar}")));
        }
        Ok(WaveGrid {
            q_min,
            q_max,
            hbar,
            psi,
            dpsi: None,
        })
    }

    pub fn len(&self) -> usize {
        self.psi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.psi.is_empty()
    }

    pub fn dq(&self) -> f64 {
        (self.q_max - self.q_min) / (self.len() - 1) as f64
    }

    pub fn q(&self, i: usize) -> f64 {
        self.q_min + self.dq() * i as f64
    }

    /// Error unless `|ψ|` is below the tolerance at both ends.
    pub fn check_decay(&self) -> Result<()> {
        let edge = self.psi[0].norm().max(self.psi[self.len() - 1].norm());
        if edge >= BOUNDARY_TOLERANCE {
            return Err(Error::BoundaryDecay(edge));
        }
        Ok(())
    }

    pub fn norm_squared(&self) -> f64 {
        self.psi.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.dq()
    }

    pub fn derivative_samples(&self) -> Vec<Complex64> {
        match &self.dpsi {
            Some(d) => d.clone(),
            None => {
                let re: Vec<f64> = self.psi.iter().map(|z| z.re).collect();
                let im: Vec<f64> = self.psi.iter().map(|z| z.im).collect();
                let (dre, dim) = (fd4(&re, self.dq()), fd4(&im, self.dq()));
                dre.into_iter().zip(dim).map(|(a, b)| Complex64::new(a, b)).collect()
            }
        }
    }
}

/// Fourth-order central differences with one-sided closures at both ends.
pub fn fd4(f: &[f64], h: f64) -> Vec<f64> {
    let n = f.len();
    assert!(n >= 5, "fd4 needs at least 5 samples");
    let mut out = vec![0.0; n];
    for i in 2..n - 2 {
        out[i] = (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) / (12.0 * h);
    }
    out[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / (12.0 * h);
    out[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) / (12.0 * h);
    let m = n - 1;
    out[m] = (25.0 * f[m] - 48.0 * f[m - 1] + 36.0 * f[m - 2] - 16.0 * f[m - 3] + 3.0 * f[m - 4]) / (12.0 * h);
    out[m - 1] = (3.0 * f[m] + 10.0 * f[m - 1] - 18.0 * f[m - 2] + 6.0 * f[m - 3] - f[m - 4]) / (12.0 * h);
    out
}

/// Complex phase-space samples; index `[j * nq + i]` holds `(p_j, q_i)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseGrid {
    pub q_min: f64,
    pub q_max: f64,
    pub p_min: f64,
    pub p_max: f64,
    pub nq: usize,
    pub np: usize,
    pub values: Vec<Complex64>,
}

impl PhaseGrid {
    pub fn dq(&self) -> f64 {
        (self.q_max - self.q_min) / (self.nq - 1) as f64
    }

    pub fn dp(&self) -> f64 {
        (self.p_max - self.p_min) / (self.np - 1) as f64
    }

    pub fn q(&self, i: usize) -> f64 {
        self.q_min + self.dq() * i as f64
    }

    pub fn p(&self, j: usize) -> f64 {
        self.p_min + self.dp() * j as f64
    }

    pub fn at(&self, j: usize, i: usize) -> Complex64 {
        self.values[j * self.nq + i]
    }
}

/// A real Wigner function on a `q × p` grid.
#[derive(Clone, Debug, PartialEq)]
pub struct WignerGrid {
    pub q_min: f64,
    pub q_max: f64,
    pub p_min: f64,
    pub p_max: f64,
    pub nq: usize,
    pub np: usize,
    pub hbar: f64,
    /// `ρ(p_j, q_i)` at `[j * nq + i]`.
    pub rho: Vec<f64>,
    /// `max |Im ρ|` discarded by the transform.
    pub imaginary_residue: f64,
}

impl WignerGrid {
    pub fn dq(&self) -> f64 {
        (self.q_max - self.q_min) / (self.nq - 1) as f64
    }

    pub fn dp(&self) -> f64 {
        (self.p_max - self.p_min) / (self.np - 1) as f64
    }

    pub fn q(&self, i: usize) -> f64 {
        self.q_min + self.dq() * i as f64
    }

    pub fn p(&self, j: usize) -> f64 {
        self.p_min + self.dp() * j as f64
    }

    pub fn at(&self, j: usize, i: usize) -> f64 {
        self.rho[j * self.nq + i]
    }

    /// Value at the grid point nearest `(q, p)`.
    pub fn nearest(&self, q: f64, p: f64) -> f64 {
        let i = ((q - self.q_min) / self.dq()).round().clamp(0.0, (self.nq - 1) as f64) as usize;
        let j = ((p - self.p_min) / self.dp()).round().clamp(0.0, (self.np - 1) as f64) as usize;
        self.at(j, i)
    }

    pub fn integral(&self) -> f64 {
        self.rho.iter().sum::<f64>() * self.dq() * self.dp()
    }

    pub fn integral_of_square(&self) -> f64 {
        self.rho.iter().map(|r| r * r).sum::<f64>() * self.dq() * self.dp()
    }

    /// `∫ρ dp` at each `q_i`.
    pub fn q_marginal(&self) -> Vec<f64> {
        (0..self.nq)
            .map(|i| (0..self.np).map(|j| self.at(j, i)).sum::<f64>() * self.dp())
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("q,p,rho\n");
        for j in 0..self.np {
            for i in 0..self.nq {
                let _ = writeln!(out, "{:.10e},{:.10e},{:.10e}", self.q(i), self.p(j), self.at(j, i));
            }
        }
        out
    }
}

/// Momentum axis for a transform.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MomentumAxis {
    pub p_min: f64,
    pub p_max: f64,
    pub np: usize,
}

impl MomentumAxis {
    pub fn symmetric(half_width: f64, np: usize) -> Self {
        MomentumAxis {
            p_min: -half_width,
            p_max: half_width,
            np,
        }
    }

    fn values(&self) -> Result<Vec<f64>> {
        WaveGrid::axis(self.p_min, self.p_max, self.np)
    }
}

/// `(1/2π) ∫ f(ψ, ψ')(q, s) e^{−ips} ds` for a pair kernel `f` evaluated on
/// `(ψ*(q − ħs/2), ψ'*(q − ħs/2), ψ(q + ħs/2), ψ'(q + ħs/2))`.
fn pair_transform<F>(w: &WaveGrid, dpsi: &[Complex64], axis: &MomentumAxis, kernel: F) -> Result<PhaseGrid>
where
    F: Fn(Complex64, Complex64, Complex64, Complex64) -> Complex64 + Sync,
{
    let ps = axis.values()?;
    let nq = w.len();
    let np = ps.len();
    let dq = w.dq();
    let ds = 2.0 * dq / w.hbar;
    let p_extent = axis.p_min.abs().max(axis.p_max.abs());
    if p_extent * ds >= PI {
        return Err(Error::InvalidGrid(format!(
            "momentum range ±{p_extent} aliases with s-step {ds}; refine the q grid"
        )));
    }
    // phases[j][k] = e^{−i p_j s_k}
    let phases: Vec<Vec<Complex64>> = ps
        .iter()
        .map(|&p| (0..nq).map(|k| Complex64::from_polar(1.0, -p * ds * k as f64)).collect())
        .collect();
    let pref = ds / (2.0 * PI);
    let columns: Vec<Vec<Complex64>> = (0..nq)
        .into_par_iter()
        .map(|i| {
            let reach = i.min(nq - 1 - i);
            let pairs: Vec<(Complex64, Complex64)> = (1..=reach)
                .map(|k| {
                    let plus = kernel(w.psi[i - k].conj(), dpsi[i - k].conj(), w.psi[i + k], dpsi[i + k]);
                    let minus = kernel(w.psi[i + k].conj(), dpsi[i + k].conj(), w.psi[i - k], dpsi[i - k]);
                    (plus, minus)
                })
                .collect();
            let centre = kernel(w.psi[i].conj(), dpsi[i].conj(), w.psi[i], dpsi[i]);
            phases
                .iter()
                .map(|row| {
                    let mut acc = centre;
                    for (k, &(plus, minus)) in pairs.iter().enumerate() {
                        let e = row[k + 1];
                        acc += plus * e + minus * e.conj();
                    }
                    acc * pref
                })
                .collect()
        })
        .collect();
    let mut values = vec![Complex64::new(0.0, 0.0); nq * np];
    for (i, col) in columns.iter().enumerate() {
        for (j, v) in col.iter().enumerate() {
            values[j * nq + i] = *v;
        }
    }
    Ok(PhaseGrid {
        q_min: w.q_min,
        q_max: w.q_max,
        p_min: axis.p_min,
        p_max: axis.p_max,
        nq,
        np,
        values,
    })
}

/// Trapezoid quadrature of the defining integral. The integrand vanishes
/// at the ends of the `s` range by the decay check, so the trapezoid rule
/// reduces to a plain sum.
pub fn wigner_transform(psi: &WaveGrid, axis: &MomentumAxis) -> Result<WignerGrid> {
    psi.check_decay()?;
    let zeros = vec![Complex64::new(0.0, 0.0); psi.len()];
    let grid = pair_transform(psi, &zeros, axis, |a, _, b, _| a * b)?;
    let imaginary_residue = grid.values.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    Ok(WignerGrid {
        q_min: grid.q_min,
        q_max: grid.q_max,
        p_min: grid.p_min,
        p_max: grid.p_max,
        nq: grid.nq,
        np: grid.np,
        hbar: psi.hbar,
        rho: grid.values.iter().map(|z| z.re).collect(),
        imaginary_residue,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormalizationReport {
    pub integral: f64,
    pub integral_of_square: f64,
    pub expected_square: f64,
    pub integral_error: f64,
    pub square_error: f64,
}

/// `∬ρ` (expect 1) and `∬ρ²` (expect `1/(2πħ)` for a pure state).
pub fn check_normalization(rho: &WignerGrid) -> NormalizationReport {
    let integral = rho.integral();
    let integral_of_square = rho.integral_of_square();
    let expected_square = 1.0 / (2.0 * PI * rho.hbar);
    NormalizationReport {
        integral,
        integral_of_square,
        expected_square,
        integral_error: (integral - 1.0).abs(),
        square_error: (integral_of_square - expected_square).abs(),
    }
}

/// `max_q |∫ρ dp − |ψ(q)|²|`.
pub fn marginal_error(rho: &WignerGrid, psi: &WaveGrid) -> f64 {
    rho.q_marginal()
        .iter()
        .zip(&psi.psi)
        .map(|(m, z)| (m - z.norm_sqr()).abs())
        .fold(0.0, f64::max)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuantisationReport {
    /// `‖pρ − c₋I₋‖` with `c₋ = −iħ/(4π)`.
    pub lhs_identity_error: f64,
    /// `‖−iħ∂_qρ − c₊I₊‖` with `c₊ = −iħ/(2π)`.
    pub rhs_identity_error: f64,
    /// `‖A − B‖`.
    pub gap: f64,
    /// `‖A‖`.
    pub lhs_norm: f64,
    /// `‖B‖`.
    pub rhs_norm: f64,
    /// `max |A|` and `max |B|` on the grid row nearest `p = 0`.
    pub p_zero_slice: (f64, f64),
}

/// Apply both sides of `p = −iħ∂/∂q` to the Wigner function of `psi` and
/// compare each with its boundary-integral form
/// `∫[∓∂ψ*/∂q ψ + ψ* ∂ψ/∂q] e^{−isp} ds`.
///
/// Norms are discrete `L²` norms over `q` columns away from the two edge
/// pairs, where the finite-difference closures sit.
pub fn quantisation_rule_check(psi: &WaveGrid, axis: &MomentumAxis) -> Result<QuantisationReport> {
    let rho = wigner_transform(psi, axis)?;
    let dpsi = psi.derivative_samples();
    // (ψ*(q−), ψ'*(q−), ψ(q+), ψ'(q+))
    let i_minus = pair_transform(psi, &dpsi, axis, |a, da, b, db| -da * b + a * db)?;
    let i_plus = pair_transform(psi, &dpsi, axis, |a, da, b, db| da * b + a * db)?;
    let (nq, np) = (rho.nq, rho.np);
    let hbar = psi.hbar;
    // the kernels already carry 1/(2π); c∓ supply the rest
    let c_minus = Complex64::new(0.0, -hbar / 2.0);
    let c_plus = Complex64::new(0.0, -hbar);
    let mut a = vec![Complex64::new(0.0, 0.0); nq * np];
    let mut b = vec![Complex64::new(0.0, 0.0); nq * np];
    for j in 0..np {
        let row: Vec<f64> = (0..nq).map(|i| rho.at(j, i)).collect();
        let d = fd4(&row, rho.dq());
        for i in 0..nq {
            a[j * nq + i] = Complex64::new(rho.p(j) * row[i], 0.0);
            b[j * nq + i] = Complex64::new(0.0, -hbar * d[i]);
        }
    }
    let cell = rho.dq() * rho.dp();
    let norm = |f: &dyn Fn(usize) -> Complex64| -> f64 {
        let mut s = 0.0;
        for j in 0..np {
            for i in 2..nq - 2 {
                s += f(j * nq + i).norm_sqr();
            }
        }
        (s * cell).sqrt()
    };
    let lhs_identity_error = norm(&|k| a[k] - c_minus * i_minus.values[k]);
    let rhs_identity_error = norm(&|k| b[k] - c_plus * i_plus.values[k]);
    let gap = norm(&|k| a[k] - b[k]);
    let lhs_norm = norm(&|k| a[k]);
    let rhs_norm = norm(&|k| b[k]);
    let j0 = (0..np)
        .min_by(|&x, &y| rho.p(x).abs().total_cmp(&rho.p(y).abs()))
        .expect("nonempty axis");
    let slice = |v: &[Complex64]| (0..nq).map(|i| v[j0 * nq + i].norm()).fold(0.0, f64::max);
    Ok(QuantisationReport {
        lhs_identity_error,
        rhs_identity_error,
        gap,
        lhs_norm,
        rhs_norm,
        p_zero_slice: (slice(&a), slice(&b)),
    })
}
