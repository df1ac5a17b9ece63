//! Laplace transforms of the interference fields of singles and pairs,
//! including exclusion radii, the closed form for the singles' transform at
//! zero exclusion, and a tabulate-and-interpolate acceleration for the
//! coverage integrals.

use crate::config::{DerivedConstants, NetworkConfig};
use crate::dist::rice_pdf;
use crate::error::{Error, Result};
use crate::numeric::{integrate, integrate_power_tail, Pchip, QuadConfig};
use crate::signals::{pair_one_minus_lt, CooperationScheme};

/// Arguments of a total-interference Laplace transform evaluation.
#[derive(Debug, Clone)]
pub struct InterferenceLtQuery {
    pub s: f64,
    /// Exclusion radius of the singles field (km).
    pub rho_singles: f64,
    /// Exclusion radius of the pairs field (km); a pair contributes only if
    /// both its parent and its daughter lie beyond it.
    pub rho_pairs: f64,
    pub scheme: CooperationScheme,
}

fn check_s_rho(s: f64, rho: f64) -> Result<()> {
    if !(s >= 0.0) {
        return Err(Error::ParameterDomain(format!("s must be >= 0, got {s}")));
    }
    if !(rho >= 0.0) {
        return Err(Error::ParameterDomain(format!(
            "exclusion radius must be >= 0, got {rho}"
        )));
    }
    Ok(())
}

/// `int_rho^inf (1 - L_f(s; r)) r dr = int_rho^inf s p r/(s p + r^beta) dr`,
/// the exponent integrand of the singles' field.
pub fn singles_exponent_integral(
    s: f64,
    rho: f64,
    cfg: &NetworkConfig,
    quad: &QuadConfig,
) -> Result<f64> {
    check_s_rho(s, rho)?;
    if s == 0.0 {
        return Ok(0.0);
    }
    let sp = s * cfg.power;
    let beta = cfg.beta;
    // beyond ~4 (sp)^(1/beta) the integrand is in its algebraic tail
    let split = rho.max(4.0 * sp.powf(1.0 / beta)).max(1e-3);
    let out = integrate_power_tail(
        |r: f64| sp * r / (sp + r.powf(beta)),
        rho,
        split,
        beta,
        quad,
    );
    if !out.converged {
        return Err(Error::Quadrature {
            context: "singles_exponent_integral".into(),
            requested: quad.abs_tol,
            achieved: out.abs_error,
        });
    }
    Ok(out.value)
}

/// Laplace transform of the singles' interference field outside radius
/// `rho`: `exp(-lambda 2 pi (1 - delta) int_rho^inf (1 - L_f(s;r)) r dr)`.
pub fn lt_singles(
    s: f64,
    rho: f64,
    cfg: &NetworkConfig,
    consts: &DerivedConstants,
    quad: &QuadConfig,
) -> Result<f64> {
    let j = singles_exponent_integral(s, rho, cfg, quad)?;
    Ok((-cfg.lambda * 2.0 * std::f64::consts::PI * (1.0 - consts.delta) * j).exp())
}

/// Closed form of [`lt_singles`] at `rho = 0`:
/// `exp(-lambda (1-delta) 2 pi^2 (s p)^(2/beta) / beta * csc(2 pi / beta))`.
pub fn lt_singles_closed(s: f64, cfg: &NetworkConfig, consts: &DerivedConstants) -> Result<f64> {
    check_s_rho(s, 0.0)?;
    if !(cfg.beta > 2.0) {
        return Err(Error::ParameterDomain(format!(
            "closed form requires beta > 2, got {}",
            cfg.beta
        )));
    }
    let pi = std::f64::consts::PI;
    let csc = 1.0 / (2.0 * pi / cfg.beta).sin();
    let exponent = cfg.lambda * (1.0 - consts.delta) * 2.0 * pi * pi
        * (s * cfg.power).powf(2.0 / cfg.beta)
        / cfg.beta
        * csc;
    Ok((-exponent).exp())
}

/// Exponent integrand of the pairs' field at parent radius `r`:
/// `E[(1 - e^(-s g(r, Z))) 1{Z > rho}] = int_rho^inf (1 - E[e^(-s g(r,z))])
/// f(z|r) dz`.
///
/// A pair whose daughter sits inside `rho` is excluded from the field and
/// contributes a factor of 1 to the transform, hence no mass term here. The
/// one-minus form is kept throughout because the integrand carries the
/// algebraic far-field tail that `1 - (1 - eps)` would round away.
pub fn one_minus_lt_pair_conditional(
    s: f64,
    r: f64,
    rho: f64,
    scheme: &CooperationScheme,
    cfg: &NetworkConfig,
    consts: &DerivedConstants,
    quad: &QuadConfig,
) -> Result<f64> {
    let alpha = consts.alpha;
    let lo = rho.max((r - 14.0 * alpha).max(0.0));
    let hi = r + 14.0 * alpha;
    if lo >= hi {
        // rho covers the daughter's entire mass-bearing range: the pair is
        // (almost surely) excluded and contributes nothing
        return Ok(0.0);
    }
    // In the far field the integral shrinks like s r^-beta while the Rice
    // factor stays a narrow spike; an absolute tolerance alone would accept
    // the first coarse pass there with O(1) relative error. Rescale it to the
    // integrand's magnitude so the accuracy stays relative.
    let scale = pair_one_minus_lt(s, r, r.max(lo), scheme, cfg)?;
    let eff = QuadConfig {
        abs_tol: if scale > 0.0 {
            quad.abs_tol.min(quad.rel_tol * scale)
        } else {
            quad.abs_tol
        },
        ..*quad
    };
    let mut inner_err: Option<Error> = None;
    let out = integrate(
        |zv: f64| {
            if zv <= 0.0 {
                return 0.0;
            }
            match pair_one_minus_lt(s, r, zv, scheme, cfg) {
                Ok(v) => v * rice_pdf(zv, r, alpha),
                Err(e) => {
                    inner_err.get_or_insert(e);
                    0.0
                }
            }
        },
        lo,
        hi,
        &eff,
    );
    if let Some(e) = inner_err {
        return Err(e);
    }
    Ok(out.value.clamp(0.0, 1.0))
}

/// `int_rho^inf (1 - L_g(s; r, rho)) r dr`, the exponent integrand of the
/// pairs' field. The inner z-quadrature runs 10x tighter than the outer.
pub fn pairs_exponent_integral(
    s: f64,
    rho: f64,
    scheme: &CooperationScheme,
    cfg: &NetworkConfig,
    consts: &DerivedConstants,
    quad: &QuadConfig,
) -> Result<f64> {
    check_s_rho(s, rho)?;
    if !scheme.is_analytic() {
        return Err(Error::UnsupportedScheme(scheme.name()));
    }
    if s == 0.0 {
        return Ok(0.0);
    }
    let inner_quad = QuadConfig {
        abs_tol: quad.abs_tol * 0.1,
        rel_tol: quad.rel_tol * 0.1,
        ..*quad
    };
    let sp = (s * cfg.power).max(f64::MIN_POSITIVE);
    let beta = cfg.beta;
    // the pair emits at most ~2x a single's mean power in the far field
    let split = rho
        .max(4.0 * (2.0 * sp).powf(1.0 / beta))
        .max(rho + 14.0 * consts.alpha)
        .max(1e-3);

    let mut inner_err: Option<Error> = None;
    let out = integrate_power_tail(
        |r: f64| {
            if r <= 0.0 {
                return 0.0;
            }
            match one_minus_lt_pair_conditional(s, r, rho, scheme, cfg, consts, &inner_quad) {
                Ok(v) => v * r,
                Err(e) => {
                    inner_err.get_or_insert(e);
                    0.0
                }
            }
        },
        rho,
        split,
        beta,
        quad,
    );
    if let Some(e) = inner_err {
        return Err(e);
    }
    if !out.converged {
        return Err(Error::Quadrature {
            context: "pairs_exponent_integral".into(),
            requested: quad.abs_tol,
            achieved: out.abs_error,
        });
    }
    Ok(out.value)
}

/// Laplace transform of the pairs' interference field outside radius `rho`:
/// `exp(-pi lambda delta int_rho^inf E[(1 - e^(-s g(r,Z))) 1{Z > rho}] r dr)`.
/// A pair with either member inside `rho` is dropped from the field.
pub fn lt_pairs(
    s: f64,
    rho: f64,
    scheme: &CooperationScheme,
    cfg: &NetworkConfig,
    consts: &DerivedConstants,
    quad: &QuadConfig,
) -> Result<f64> {
    let j = pairs_exponent_integral(s, rho, scheme, cfg, consts, quad)?;
    Ok((-std::f64::consts::PI * cfg.lambda * consts.delta * j).exp())
}

/// Product of the two fields' transforms (the fields are independent).
pub fn lt_total(
    query: &InterferenceLtQuery,
    cfg: &NetworkConfig,
    consts: &DerivedConstants,
    quad: &QuadConfig,
) -> Result<f64> {
    let a = lt_singles(query.s, query.rho_singles, cfg, consts, quad)?;
    let b = lt_pairs(query.s, query.rho_pairs, &query.scheme, cfg, consts, quad)?;
    Ok(a * b)
}

// ---------------------------------------------------------------------------
// Tabulation
// ---------------------------------------------------------------------------

/// Tabulated exponent integrals on a (log s, rho) grid with monotone cubic
/// interpolation, reused across an entire threshold grid by the coverage
/// integrals. Absolute accuracy on the resulting coverage values is well
/// below 1e-4 (regression-tested against the direct quadratures).
pub struct LtTable {
    rho_grid: Vec<f64>,
    /// one PCHIP in ln s per rho knot, storing ln J(s, rho)
    rows: Vec<Pchip<f64>>,
    lambda_factor: f64,
}

impl LtTable {
    /// Tabulate the pairs' exponent for a scheme. `s` spans
    /// `[s_min, s_max]` log-uniformly; `rho` spans `[0, rho_max]`.
    pub fn build_pairs(
        scheme: &CooperationScheme,
        cfg: &NetworkConfig,
        consts: &DerivedConstants,
        s_min: f64,
        s_max: f64,
        rho_max: f64,
        quad: &QuadConfig,
    ) -> Result<Self> {
        let factor = std::f64::consts::PI * cfg.lambda * consts.delta;
        Self::build(
            |s, rho| pairs_exponent_integral(s, rho, scheme, cfg, consts, quad),
            factor,
            s_min,
            s_max,
            rho_max,
        )
    }

    /// Tabulate the singles' exponent.
    pub fn build_singles(
        cfg: &NetworkConfig,
        consts: &DerivedConstants,
        s_min: f64,
        s_max: f64,
        rho_max: f64,
        quad: &QuadConfig,
    ) -> Result<Self> {
        let factor = cfg.lambda * 2.0 * std::f64::consts::PI * (1.0 - consts.delta);
        Self::build(
            |s, rho| singles_exponent_integral(s, rho, cfg, quad),
            factor,
            s_min,
            s_max,
            rho_max,
        )
    }

    fn build<F>(mut j: F, lambda_factor: f64, s_min: f64, s_max: f64, rho_max: f64) -> Result<Self>
    where
        F: FnMut(f64, f64) -> Result<f64>,
    {
        assert!(s_min > 0.0 && s_max > s_min && rho_max > 0.0);
        let n_s = 130usize;
        let n_rho = 64usize;
        let ls_min = s_min.ln();
        let ls_max = s_max.ln();
        let s_grid: Vec<f64> = (0..n_s)
            .map(|i| (ls_min + (ls_max - ls_min) * i as f64 / (n_s - 1) as f64).exp())
            .collect();
        // denser near rho = 0, where the exponent bends fastest
        let rho_grid: Vec<f64> = (0..n_rho)
            .map(|i| rho_max * (i as f64 / (n_rho - 1) as f64).powf(1.5))
            .collect();

        let mut rows = Vec::with_capacity(n_rho);
        for &rho in &rho_grid {
            let mut lnj = Vec::with_capacity(n_s);
            for &s in &s_grid {
                let v = j(s, rho)?;
                // J > 0 for s > 0; guard against a zero from underflow
                lnj.push(v.max(1e-300).ln());
            }
            let ls: Vec<f64> = s_grid.iter().map(|s| s.ln()).collect();
            rows.push(Pchip::new(ls, lnj));
        }
        Ok(Self {
            rho_grid,
            rows,
            lambda_factor,
        })
    }

    /// Interpolated exponent integral `J(s, rho)`.
    pub fn exponent(&self, s: f64, rho: f64) -> f64 {
        if s <= 0.0 {
            return 0.0;
        }
        let ls = s.ln();
        let n = self.rho_grid.len();
        let rho = rho.clamp(self.rho_grid[0], self.rho_grid[n - 1]);
        // bracketing rho interval
        let mut lo = 0usize;
        let mut hi = n - 1;
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if self.rho_grid[mid] <= rho {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        // cubic through the four surrounding rho rows (clamped at the ends)
        let i1 = lo;
        let i0 = i1.saturating_sub(1);
        let i2 = hi;
        let i3 = (hi + 1).min(n - 1);
        let x0 = self.rho_grid[i0];
        let x1 = self.rho_grid[i1];
        let x2 = self.rho_grid[i2];
        let x3 = self.rho_grid[i3];
        let y0 = self.rows[i0].eval(ls);
        let y1 = self.rows[i1].eval(ls);
        let y2 = self.rows[i2].eval(ls);
        let y3 = self.rows[i3].eval(ls);

        let h = x2 - x1;
        if h <= 0.0 {
            return y1.exp();
        }
        let t = (rho - x1) / h;
        // Hermite with finite-difference slopes
        let m1 = if i0 == i1 {
            (y2 - y1) / h
        } else {
            0.5 * ((y1 - y0) / (x1 - x0) + (y2 - y1) / h)
        };
        let m2 = if i3 == i2 {
            (y2 - y1) / h
        } else {
            0.5 * ((y2 - y1) / h + (y3 - y2) / (x3 - x2))
        };
        let t2 = t * t;
        let t3 = t2 * t;
        let val = (2.0 * t3 - 3.0 * t2 + 1.0) * y1
            + (t3 - 2.0 * t2 + t) * h * m1
            + (-2.0 * t3 + 3.0 * t2) * y2
            + (t3 - t2) * h * m2;
        val.exp()
    }

    /// Interpolated Laplace transform `exp(-factor J(s, rho))`.
    pub fn lt(&self, s: f64, rho: f64) -> f64 {
        (-self.lambda_factor * self.exponent(s, rho)).exp()
    }
}
