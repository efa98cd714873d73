//! Series ansatz `R(r) = r^(β+½)·exp(qr + ½pr²)·Σ aₙrⁿ` for the radial
//! equation, its three-term recurrence and the quasi-exactness constraint.
//!
//! Everything here is indexed by the polynomial degree `s`; the map to
//! radial quantum numbers lives in [`crate::spectrum`].

use crate::error::{Error, Result};
use crate::model::RadialParams;
use crate::quad;

/// Bound on the scaled determinant for a parameter set to count as
/// quasi-exactly solvable.
pub const CONSTRAINT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct SeriesSolution {
    pub s: u32,
    /// `a₀ … a_s`, with `a₀ = 1`.
    pub coeffs: Vec<f64>,
    /// Parameters with `q` resolved for degree `s`.
    pub params: RadialParams,
    pub epsilon2: f64,
    pub energy: f64,
}

/// `(Aₙ, Bₙ, Cₙ)` of the recurrence `Aₙ₋₁aₙ₋₁ + Bₙaₙ + Cₙ₊₁aₙ₊₁ = 0`.
pub fn recurrence_coeffs(params: &RadialParams, epsilon2: f64, n: u32) -> (f64, f64, f64) {
    let nf = n as f64;
    let (p, q, beta) = (params.p, params.q, params.beta);
    let a = -epsilon2 + q * q + 2.0 * p * (nf + beta + 1.0);
    let b = params.gprime + q * (2.0 * nf + 2.0 * beta + 1.0);
    let c = nf * (nf + 2.0 * beta);
    (a, b, c)
}

// Magnitude of B without the cancellation between g' and q(2n+2β+1).
fn b_scale(params: &RadialParams, n: u32) -> f64 {
    params.gprime.abs() + params.q.abs() * (2.0 * n as f64 + 2.0 * params.beta + 1.0)
}

/// `ε² = q² + 2p(s + β + 1)`, with `q` taken at degree `s` on the Coulomb branch.
pub fn closure_epsilon2(params: &RadialParams, s: u32) -> f64 {
    let p = params.at_degree(s);
    p.q * p.q + 2.0 * p.p * (s as f64 + p.beta + 1.0)
}

/// Determinant of the `(s+1)×(s+1)` banded matrix with rows
/// `(Aₖ₋₁, Bₖ, Cₖ₊₁)`, from `D₋₁ = 1, D₀ = B₀,
/// Dₖ = BₖDₖ₋₁ − Aₖ₋₁CₖDₖ₋₂`.
///
/// The result is divided by the same recurrence run on magnitudes (with
/// `|Bₖ|` replaced by `|g'| + |q|(2k+2β+1)`), so it is dimensionless, lies
/// in `[−1, 1]` and measures how completely the terms cancel. Both
/// sequences are rescaled at every step to avoid overflow.
pub fn determinant_residual(params: &RadialParams, epsilon2: f64, s: u32) -> f64 {
    let (_, b0, _) = recurrence_coeffs(params, epsilon2, 0);
    let (mut d_prev, mut d) = (1.0, b0);
    let (mut m_prev, mut m) = (1.0, b_scale(params, 0));
    for k in 1..=s {
        let (_, bk, ck) = recurrence_coeffs(params, epsilon2, k);
        let (ak1, _, _) = recurrence_coeffs(params, epsilon2, k - 1);
        let d_next = bk * d - ak1 * ck * d_prev;
        let m_next = b_scale(params, k) * m + (ak1 * ck).abs() * m_prev;
        (d_prev, d, m_prev, m) = (d, d_next, m, m_next);
        if m > 0.0 {
            let inv = 1.0 / m;
            d_prev *= inv;
            d *= inv;
            m_prev *= inv;
            m = 1.0;
        }
    }
    if m == 0.0 {
        0.0
    } else {
        d / m
    }
}

/// `E = d + ½ħω_c m' − ε²·ħ²/2μ`.
pub fn energy_from_epsilon(params: &RadialParams, epsilon2: f64) -> f64 {
    (params.dprime - epsilon2) / params.twomu + 0.5 * params.hbar_omega_c * params.mprime
}

/// Builds the degree-`s` polynomial solution. Fails with
/// [`Error::ConstraintViolated`] when the potential does not satisfy the
/// determinant constraint for this degree.
pub fn solve_series(params: &RadialParams, s: u32) -> Result<SeriesSolution> {
    let params = params.at_degree(s);
    let epsilon2 = closure_epsilon2(&params, s);
    let residual = determinant_residual(&params, epsilon2, s);
    if residual.is_nan() || residual.abs() > CONSTRAINT_TOL {
        return Err(Error::ConstraintViolated {
            degree: s,
            residual,
        });
    }

    let len = s as usize + 3;
    let mut a = vec![0.0; len];
    a[0] = 1.0;
    for k in 0..len - 1 {
        let (_, bk, _) = recurrence_coeffs(&params, epsilon2, k as u32);
        let (_, _, ck1) = recurrence_coeffs(&params, epsilon2, k as u32 + 1);
        let mut acc = bk * a[k];
        if k > 0 {
            acc += recurrence_coeffs(&params, epsilon2, k as u32 - 1).0 * a[k - 1];
        }
        a[k + 1] = -acc / ck1;
    }

    let s_us = s as usize;
    let max_kept = a[..=s_us].iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let tail = a[s_us + 1].abs().max(a[s_us + 2].abs());
    if tail > CONSTRAINT_TOL * max_kept || a[s_us] == 0.0 {
        return Err(Error::ConstraintViolated {
            degree: s,
            residual: tail / max_kept,
        });
    }
    a.truncate(s_us + 1);

    Ok(SeriesSolution {
        s,
        coeffs: a,
        energy: energy_from_epsilon(&params, epsilon2),
        params,
        epsilon2,
    })
}

/// Value of `b` (eV/Å) that satisfies the degree-0 constraint for given
/// `γ` (Å⁻²), `g` (eV·Å) and `β`: `b = γg/(½ + β)`.
pub fn s0_constraint_b(gamma: f64, g: f64, beta: f64) -> f64 {
    gamma * g / (0.5 + beta)
}

/// Both roots `g` (eV·Å) of the degree-1 constraint `B₀B₁ − A₀C₁ = 0`
/// for the `b`, `γ` and `β` carried by `params` (its own `g` is ignored):
/// `g = (b/γ)(β+1) ± (ħ²/2μ)·√(μ²b²/ħ⁴γ² + 2γ(2β+1))`.
pub fn s1_constraint_g(params: &RadialParams) -> Result<[f64; 2]> {
    if params.gamma <= 0.0 {
        return Err(Error::CoulombBranch);
    }
    let u = params.bprime / (2.0 * params.gamma);
    let centre = u * (2.0 * params.beta + 2.0);
    let root = (u * u + 2.0 * params.gamma * (2.0 * params.beta + 1.0)).sqrt();
    Ok([(centre - root) / params.twomu, (centre + root) / params.twomu])
}

/// Which radial function to evaluate: `R(r)` or `u(r) = r^(−½)R(r)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Component {
    R,
    U,
}

fn horner(c: &[f64], r: f64) -> (f64, f64, f64) {
    let (mut f, mut d1, mut d2) = (0.0, 0.0, 0.0);
    for &a in c.iter().rev() {
        d2 = d2 * r + 2.0 * d1;
        d1 = d1 * r + f;
        f = f * r + a;
    }
    (f, d1, d2)
}

/// Sign and natural log of `|R(r)|`; `(0, −∞)` at polynomial nodes.
pub fn ln_radial(sol: &SeriesSolution, r: f64) -> (f64, f64) {
    let p = &sol.params;
    let (f, _, _) = horner(&sol.coeffs, r);
    let lnf = f.abs().ln();
    let ln = (p.beta + 0.5) * r.ln() + p.q * r + 0.5 * p.p * r * r + lnf;
    (f.signum(), ln)
}

/// Unnormalized `R(r)` or `u(r)` with `a₀ = 1`.
pub fn eval_radial_wavefunction(sol: &SeriesSolution, r: f64, component: Component) -> Result<f64> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::domain(format!("radius must be > 0, got {r}")));
    }
    let (sign, mut ln) = ln_radial(sol, r);
    if component == Component::U {
        ln -= 0.5 * r.ln();
    }
    Ok(sign * ln.exp())
}

/// Residual of `R'' + (−ε² − γ²r² + g'/r − b'r − (β²−¼)/r²)R = 0` at `r`,
/// divided by the sum of magnitudes of the individual terms.
pub fn ode_residual(sol: &SeriesSolution, r: f64) -> Result<f64> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::domain(format!("radius must be > 0, got {r}")));
    }
    let p = &sol.params;
    let lam = p.beta + 0.5;
    let (f, f1, f2) = horner(&sol.coeffs, r);
    let h = lam / r + p.q + p.p * r;
    let dh = -lam / (r * r) + p.p;
    let pot = [
        -sol.epsilon2,
        -p.gamma * p.gamma * r * r,
        p.gprime / r,
        -p.bprime * r,
        -(p.beta * p.beta - 0.25) / (r * r),
    ];
    let terms = [f2, 2.0 * h * f1, h * h * f, dh * f];
    let sum: f64 = terms.iter().sum::<f64>() + pot.iter().sum::<f64>() * f;
    let scale: f64 = terms.iter().map(|t| t.abs()).sum::<f64>()
        + pot.iter().map(|t| t.abs()).sum::<f64>() * f.abs();
    if scale == 0.0 {
        return Ok(0.0);
    }
    Ok(sum.abs() / scale)
}

/// `ln N` such that `N²∫₀^{r_max} R² dr = ∫₀^{r_max} |N u|² r dr = 1`.
pub fn ln_normalization(sol: &SeriesSolution, r_max: f64) -> Result<f64> {
    const SAMPLES: usize = 4000;
    const PANELS: usize = 64;
    const TAIL: f64 = 1e-16;

    if !(r_max > 0.0 && r_max.is_finite()) {
        return Err(Error::domain(format!("r_max must be > 0, got {r_max}")));
    }
    let p = &sol.params;
    if p.p == 0.0 && p.q >= 0.0 {
        return Err(Error::NonDecaying);
    }

    let mut ln_peak = f64::NEG_INFINITY;
    for i in 1..=SAMPLES {
        let r = r_max * i as f64 / SAMPLES as f64;
        ln_peak = ln_peak.max(ln_radial(sol, r).1);
    }
    if !ln_peak.is_finite() {
        return Err(Error::NonDecaying);
    }
    let ratio = (2.0 * (ln_radial(sol, r_max).1 - ln_peak)).exp();
    if ratio > TAIL {
        return Err(Error::TailNotNegligible { r_max, ratio });
    }

    let density = |r: f64| {
        if r <= 0.0 {
            0.0
        } else {
            (2.0 * (ln_radial(sol, r).1 - ln_peak)).exp()
        }
    };
    let width = r_max / PANELS as f64;
    let (mut total, mut err) = (0.0, 0.0);
    for i in 0..PANELS {
        let (v, e) = quad::integrate(density, i as f64 * width, (i + 1) as f64 * width, 1e-13, 1e-16 * width)?;
        total += v;
        err += e;
    }
    if err > 1e-10 * total {
        return Err(Error::Quadrature(err / total));
    }
    Ok(-ln_peak - 0.5 * total.ln())
}

/// Normalization constant `N` for the 2D radial measure.
pub fn normalize(sol: &SeriesSolution, r_max: f64) -> Result<f64> {
    let ln = ln_normalization(sol, r_max)?;
    let n = ln.exp();
    if n.is_finite() && n > 0.0 {
        Ok(n)
    } else {
        Err(Error::domain(format!(
            "normalization constant exp({ln}) is outside f64 range"
        )))
    }
}

/// Number of distinct positive real roots of `Σ cₙrⁿ`, by Sturm sequence.
pub fn positive_real_roots(coeffs: &[f64]) -> usize {
    let mut c: Vec<f64> = coeffs.to_vec();
    while c.len() > 1 && *c.last().unwrap() == 0.0 {
        c.pop();
    }
    let deg = c.len() - 1;
    if deg == 0 {
        return 0;
    }
    // rescale r so the end coefficients balance
    let l = (c[0] / c[deg]).abs().powf(1.0 / deg as f64);
    let l = if l.is_finite() && l > 0.0 { l } else { 1.0 };
    for (n, a) in c.iter_mut().enumerate() {
        *a *= l.powi(n as i32);
    }

    let trim = |p: &mut Vec<f64>, tol: f64| {
        while p.len() > 1 && p.last().unwrap().abs() <= tol {
            p.pop();
        }
    };
    let tol = 1e-12 * c.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let deriv: Vec<f64> = c.iter().enumerate().skip(1).map(|(n, a)| n as f64 * a).collect();
    let mut seq = vec![c.clone(), deriv];
    loop {
        let (num, den) = (&seq[seq.len() - 2], &seq[seq.len() - 1]);
        if den.len() == 1 {
            break;
        }
        let mut rem = num.clone();
        let dl = den.len() - 1;
        while rem.len() > dl {
            let shift = rem.len() - 1 - dl;
            let factor = rem[rem.len() - 1] / den[dl];
            for (i, d) in den.iter().enumerate() {
                rem[i + shift] -= factor * d;
            }
            rem.pop();
        }
        let mut next: Vec<f64> = rem.iter().map(|v| -v).collect();
        trim(&mut next, tol);
        if next.len() == 1 && next[0].abs() <= tol {
            break;
        }
        seq.push(next);
    }

    let changes = |vals: Vec<f64>| {
        let v: Vec<f64> = vals.into_iter().filter(|x| *x != 0.0).collect();
        v.windows(2).filter(|w| w[0].signum() != w[1].signum()).count()
    };
    let at_zero = seq.iter().map(|p| p[0]).collect();
    let at_inf = seq.iter().map(|p| p[p.len() - 1]).collect();
    changes(at_zero).saturating_sub(changes(at_inf))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{derive_radial_params, FieldConfig, Model, PowerPotential};
    use crate::units::Constants;

    const MU: f64 = 7.0035;

    fn units() -> Constants {
        Constants::default().with_field_unit_kappa(4.0e-5).unwrap()
    }

    fn params(pot: &PowerPotential, b: f64, m: i32) -> RadialParams {
        derive_radial_params(pot, &FieldConfig::new(b, 0).unwrap(), m, MU, &units()).unwrap()
    }

    fn pseudo() -> PowerPotential {
        Model::pseudoharmonic(11.938, 1.094).unwrap().potential(MU, &units()).unwrap()
    }

    fn kratzer() -> PowerPotential {
        Model::kratzer(11.938, 1.094).unwrap().potential(MU, &units()).unwrap()
    }

    fn harmonic() -> PowerPotential {
        Model::harmonic(0.15).unwrap().potential(MU, &units()).unwrap()
    }

    #[test]
    fn c0_is_zero_and_harmonic_b_vanishes() {
        let p = params(&harmonic(), 0.0, 2);
        for n in 0..6 {
            let (_, b, c) = recurrence_coeffs(&p, 3.0, n);
            assert_eq!(b, 0.0);
            if n == 0 {
                assert_eq!(c, 0.0);
            }
        }
    }

    #[test]
    fn closure_zeroes_a_s() {
        let p = params(&pseudo(), 0.0, 0);
        let eps2 = closure_epsilon2(&p, 2);
        let (a2, _, _) = recurrence_coeffs(&p, eps2, 2);
        assert!(a2.abs() <= 1e-12 * eps2.abs());
    }

    #[test]
    fn determinant_small_cases() {
        let mut p = params(&pseudo(), 0.0, 1);
        p.gprime = 3.0;
        p.q = -0.7;
        let eps2 = 5.0;
        let (_, b0, _) = recurrence_coeffs(&p, eps2, 0);
        let (a0, b1, c1) = recurrence_coeffs(&p, eps2, 1);
        let d0 = determinant_residual(&p, eps2, 0);
        let d1 = determinant_residual(&p, eps2, 1);
        // same sign and zero set as the raw determinants
        assert_eq!(d0.signum(), b0.signum());
        assert_eq!(d1.signum(), (b0 * b1 - a0 * c1).signum());
    }

    #[test]
    fn oscillator_even_degrees_always_solvable() {
        for pot in [pseudo(), harmonic()] {
            let p = params(&pot, 1.0, 1);
            for s in [0, 2, 4, 6, 8] {
                let eps2 = closure_epsilon2(&p, s);
                assert!(determinant_residual(&p, eps2, s).abs() < 1e-12, "s={s}");
            }
            let eps2 = closure_epsilon2(&p, 3);
            assert!(determinant_residual(&p, eps2, 3).abs() > 1e-3);
        }
    }

    #[test]
    fn harmonic_s2_coefficients() {
        let p = params(&harmonic(), 0.0, 0);
        let sol = solve_series(&p, 2).unwrap();
        let (a0, _, _) = recurrence_coeffs(&sol.params, sol.epsilon2, 0);
        let (_, _, c2) = recurrence_coeffs(&sol.params, sol.epsilon2, 2);
        assert_eq!(sol.coeffs.len(), 3);
        assert_eq!(sol.coeffs[1], 0.0);
        assert_eq!(sol.coeffs[2], -a0 / c2);
    }

    #[test]
    fn kratzer_field_free_each_degree() {
        let p = params(&kratzer(), 0.0, 0);
        for s in 0..5 {
            let sol = solve_series(&p, s).unwrap();
            assert_eq!(sol.coeffs.len(), s as usize + 1);
            assert!(sol.energy < 0.0);
        }
    }

    #[test]
    fn kratzer_in_field_is_not_quasi_exact() {
        let p = params(&kratzer(), 1.0, 0);
        assert!(matches!(solve_series(&p, 0), Err(Error::ConstraintViolated { degree: 0, .. })));
    }

    #[test]
    fn energy_from_zero_epsilon_is_zero() {
        let p = params(&harmonic(), 0.0, 0);
        assert_eq!(energy_from_epsilon(&p, 0.0), 0.0);
    }

    #[test]
    fn s0_coupled_potential() {
        let u = units();
        let base = PowerPotential { a: 2.0, k: 1.5, g: 4.0, ..Default::default() };
        let p0 = params(&base, 0.0, 1);
        let b = s0_constraint_b(p0.gamma, base.g, p0.beta);
        let p = params(&PowerPotential { b, ..base }, 0.0, 1);
        let eps2 = closure_epsilon2(&p, 0);
        assert!(determinant_residual(&p, eps2, 0).abs() < 1e-12);
        let sol = solve_series(&p, 0).unwrap();
        assert_eq!(sol.coeffs, vec![1.0]);
        let t = u.twomu_over_hbar2(MU).unwrap();
        let mu_b_over_hbar2 = t * b / 2.0;
        let eq20 = -2.0 * p.gamma * (p.beta + 1.0) + (mu_b_over_hbar2 / p.gamma).powi(2);
        assert!((sol.epsilon2 - eq20).abs() <= 1e-12 * eq20.abs());
    }

    #[test]
    fn s1_roots_zero_the_determinant() {
        let base = PowerPotential { a: 2.0, b: 0.3, k: 1.5, ..Default::default() };
        let p = params(&base, 0.0, 0);
        for g in s1_constraint_g(&p).unwrap() {
            let pp = params(&PowerPotential { g, ..base }, 0.0, 0);
            let eps2 = closure_epsilon2(&pp, 1);
            assert!(determinant_residual(&pp, eps2, 1).abs() < 1e-10, "g={g}");
        }
    }

    #[test]
    fn quarter_factor_in_s1_root_does_not_zero_the_determinant() {
        let base = PowerPotential { a: 2.0, b: 0.3, k: 1.5, ..Default::default() };
        let p = params(&base, 0.0, 0);
        let [_, plus] = s1_constraint_g(&p).unwrap();
        let centre = base.b / p.gamma * (p.beta + 1.0);
        let g = centre + 0.5 * (plus - centre);
        let pp = params(&PowerPotential { g, ..base }, 0.0, 0);
        let eps2 = closure_epsilon2(&pp, 1);
        assert!(determinant_residual(&pp, eps2, 1).abs() > 1e-3);
    }

    #[test]
    fn wavefunction_vanishes_at_both_ends() {
        let sol = solve_series(&params(&kratzer(), 0.0, 0), 1).unwrap();
        let near = eval_radial_wavefunction(&sol, 1e-3, Component::R).unwrap();
        let far = eval_radial_wavefunction(&sol, 50.0, Component::R).unwrap();
        let mid = eval_radial_wavefunction(&sol, 1.1, Component::R).unwrap();
        assert!(near.abs() < 1e-30 * mid.abs());
        assert!(far.abs() < 1e-30 * mid.abs());
        assert!(eval_radial_wavefunction(&sol, 0.0, Component::U).is_err());
    }

    #[test]
    fn u_is_r_over_sqrt_r() {
        let sol = solve_series(&params(&harmonic(), 0.0, 1), 2).unwrap();
        for r in [0.05, 0.1, 0.3] {
            let rr = eval_radial_wavefunction(&sol, r, Component::R).unwrap();
            let uu = eval_radial_wavefunction(&sol, r, Component::U).unwrap();
            assert!((uu * r.sqrt() - rr).abs() <= 1e-14 * rr.abs());
        }
    }

    #[test]
    fn ode_residual_small_for_solutions() {
        let cases = [
            solve_series(&params(&pseudo(), 1.0, 1), 4).unwrap(),
            solve_series(&params(&harmonic(), 2.0, -1), 6).unwrap(),
            solve_series(&params(&kratzer(), 0.0, 2), 3).unwrap(),
        ];
        for sol in &cases {
            for i in 1..=50 {
                let r = 0.02 + 3.0 * i as f64 / 50.0;
                let res = ode_residual(sol, r).unwrap();
                assert!(res < 1e-8, "s={} r={r} res={res}", sol.s);
            }
        }
    }

    #[test]
    fn harmonic_ground_state_normalization_matches_gaussian_integral() {
        // β = 0: R = √r·e^{−γr²/2}, ∫R² dr = 1/(2γ)
        let sol = solve_series(&params(&harmonic(), 0.0, 0), 0).unwrap();
        let g = sol.params.gamma;
        let n = normalize(&sol, 8.0 / g.sqrt()).unwrap();
        assert!((n - (2.0 * g).sqrt()).abs() < 1e-10 * n);
    }

    #[test]
    fn normalization_is_linear_and_idempotent() {
        let sol = solve_series(&params(&kratzer(), 0.0, 0), 2).unwrap();
        let n = normalize(&sol, 3.0).unwrap();
        let doubled = SeriesSolution {
            coeffs: sol.coeffs.iter().map(|a| 2.0 * a).collect(),
            ..sol.clone()
        };
        let n2 = normalize(&doubled, 3.0).unwrap();
        assert!((n2 - n / 2.0).abs() < 1e-12 * n);
        let scaled = SeriesSolution {
            coeffs: sol.coeffs.iter().map(|a| n * a).collect(),
            ..sol.clone()
        };
        assert!((normalize(&scaled, 3.0).unwrap() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn normalization_rejects_short_range() {
        let sol = solve_series(&params(&kratzer(), 0.0, 0), 0).unwrap();
        assert!(matches!(normalize(&sol, 1.2), Err(Error::TailNotNegligible { .. })));
    }

    #[test]
    fn sturm_counts() {
        // (r−1)(r−2)(r+3)
        assert_eq!(positive_real_roots(&[6.0, -7.0, 0.0, 1.0]), 2);
        assert_eq!(positive_real_roots(&[1.0, 0.0, 1.0]), 0);
        assert_eq!(positive_real_roots(&[1.0]), 0);
        assert_eq!(positive_real_roots(&[-2.0, 1.0]), 1);
    }

    #[test]
    fn kratzer_nodes_equal_degree() {
        for m in [0, 1, 3] {
            let p = params(&kratzer(), 0.0, m);
            for s in 0..=3 {
                let sol = solve_series(&p, s).unwrap();
                assert_eq!(positive_real_roots(&sol.coeffs), s as usize, "m={m} s={s}");
            }
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn eq22_iff_s0_determinant_vanishes(
                a in 0.1f64..20.0, k in 0.0f64..5.0, g in 0.1f64..10.0,
                m in -3i32..4, rel in prop_oneof![Just(0.0), 1e-6f64..0.5, -0.5f64..-1e-6],
            ) {
                let base = PowerPotential { a, k, g, ..Default::default() };
                let p0 = params(&base, 0.0, m);
                let b = s0_constraint_b(p0.gamma, g, p0.beta) * (1.0 + rel);
                let p = params(&PowerPotential { b, ..base }, 0.0, m);
                let res = determinant_residual(&p, closure_epsilon2(&p, 0), 0).abs();
                if rel == 0.0 {
                    prop_assert!(res <= 1e-10, "res={}", res);
                } else {
                    prop_assert!(res > 1e-10, "res={}", res);
                }
            }

            #[test]
            fn s1_relation_iff_determinant_vanishes(
                a in 0.1f64..20.0, b in 0.01f64..5.0, k in 0.0f64..5.0, m in -3i32..4,
                which in 0usize..2, rel in prop_oneof![Just(0.0), 1e-5f64..0.5],
            ) {
                let base = PowerPotential { a, b, k, ..Default::default() };
                let p0 = params(&base, 0.0, m);
                let g = s1_constraint_g(&p0).unwrap()[which] * (1.0 + rel);
                let p = params(&PowerPotential { g, ..base }, 0.0, m);
                let res = determinant_residual(&p, closure_epsilon2(&p, 1), 1).abs();
                if rel == 0.0 {
                    prop_assert!(res <= 1e-10, "res={}", res);
                } else {
                    prop_assert!(res > 1e-10, "res={}", res);
                }
            }

            #[test]
            fn closure_tail_vanishes(de in 1.0f64..15.0, re in 0.8f64..1.5, m in -3i32..4, n in 0u32..5, b in 0u32..4) {
                let u = units();
                let pot = Model::pseudoharmonic(de, re).unwrap().potential(MU, &u).unwrap();
                let p = params(&pot, b as f64, m);
                let sol = solve_series(&p, 2 * n).unwrap();
                prop_assert_eq!(sol.coeffs.len(), 2 * n as usize + 1);
                let kr = kratzer();
                let pk = params(&kr, 0.0, m);
                let solk = solve_series(&pk, n).unwrap();
                prop_assert!(solk.coeffs[n as usize] != 0.0);
            }
        }
    }
}
