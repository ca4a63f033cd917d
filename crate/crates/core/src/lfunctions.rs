//! Dirichlet L-functions with analytic continuation via Hurwitz zeta, the
//! completed L-function Λ(s,χ), its functional equation, and L, L′ at s = 1.
//!
//! Continuation is Euler–Maclaurin on ζ(s, a): the crate only ever needs
//! |s| ≲ 20 and desk-scale moduli, where thirty initial terms plus Bernoulli
//! corrections through B₃₀ give ~1e-12 relative accuracy.

use num_complex::Complex64;

use crate::characters::{gauss_sum, DirichletCharacter};
use crate::error::{Error, Result};
use crate::special::{gamma_complex, i_pow_neg_kappa, real_pow_complex};

/// B₂ through B₃₀ as exact-fraction quotients.
const BERNOULLI_EVEN: [f64; 15] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
    8615841276005.0 / 14322.0,
];

fn expm1_complex(u: Complex64) -> Complex64 {
    if u.norm() > 0.5 {
        return u.exp() - 1.0;
    }
    let mut term = u;
    let mut sum = u;
    for k in 2..30 {
        term *= u / k as f64;
        sum += term;
        if term.norm() < 1e-18 * sum.norm().max(1.0) {
            break;
        }
    }
    sum
}

/// ζ(s, a) − 1/(s−1): entire in s, evaluated by Euler–Maclaurin.
///
/// Subtracting the pole inside the expansion keeps the value accurate
/// arbitrarily close to s = 1, where the character sums we feed it cancel the
/// pole exactly.
pub fn hurwitz_zeta_pole_sub(s: Complex64, a: f64) -> Result<Complex64> {
    if a <= 0.0 {
        return Err(Error::Domain(format!("hurwitz zeta requires a > 0, got {a}")));
    }
    let n = 30 + (2.0 * s.im.abs()).ceil() as usize;
    let mut sum = Complex64::ZERO;
    for k in 0..n {
        sum += real_pow_complex(k as f64 + a, -s);
    }
    let na = n as f64 + a;
    // ((N+a)^(1−s) − 1)/(s−1), stable near s = 1.
    let u = (1.0 - s) * na.ln();
    let pole_part = if s == Complex64::ONE {
        Complex64::new(-na.ln(), 0.0)
    } else {
        expm1_complex(u) / (s - 1.0)
    };
    sum += pole_part;
    sum += 0.5 * real_pow_complex(na, -s);

    // Σ_j B_{2j}/(2j)! · s(s+1)···(s+2j−2) · (N+a)^(−s−2j+1)
    let mut pochhammer = s; // (s)_1
    let mut factorial = 2.0f64; // (2j)!
    let mut power = real_pow_complex(na, -s - 1.0);
    let na_inv2 = 1.0 / (na * na);
    for (j, b) in BERNOULLI_EVEN.iter().enumerate() {
        sum += b / factorial * pochhammer * power;
        // advance to j+1: multiply pochhammer by (s+2j−1)(s+2j), factorial
        // by (2j+1)(2j+2), power by (N+a)^(−2)
        let two_j = 2.0 * (j + 1) as f64;
        pochhammer *= (s + (two_j - 1.0)) * (s + two_j);
        factorial *= (two_j + 1.0) * (two_j + 2.0);
        power *= na_inv2;
    }
    Ok(sum)
}

/// Hurwitz zeta ζ(s, a) for s ≠ 1, a > 0.
pub fn hurwitz_zeta(s: Complex64, a: f64) -> Result<Complex64> {
    if s == Complex64::ONE {
        return Err(Error::Pole("hurwitz zeta pole at s = 1".into()));
    }
    Ok(hurwitz_zeta_pole_sub(s, a)? + 1.0 / (s - 1.0))
}

/// Riemann zeta via ζ(s, 1).
pub fn riemann_zeta(s: Complex64) -> Result<Complex64> {
    hurwitz_zeta(s, 1.0)
}

/// L(s, χ) = q^(−s) Σ_a χ(a) ζ(s, a/q), continued to the plane.
///
/// For non-principal χ the Hurwitz poles cancel exactly, so s = 1 is allowed;
/// principal characters keep their pole.
pub fn dirichlet_l(s: Complex64, chi: &DirichletCharacter) -> Result<Complex64> {
    let q = chi.modulus();
    if chi.is_principal() {
        if s == Complex64::ONE {
            return Err(Error::Pole("L(s, principal) has a pole at s = 1".into()));
        }
        // ζ(s) Π_{p|q} (1 − p^(−s)).
        let mut value = riemann_zeta(s)?;
        for (p, _) in crate::arith::factorize(q) {
            value *= Complex64::ONE - real_pow_complex(p as f64, -s);
        }
        return Ok(value);
    }
    let mut sum = Complex64::ZERO;
    for a in 1..=q {
        let chi_a = chi.value(a as i64);
        if chi_a != Complex64::ZERO {
            sum += chi_a * hurwitz_zeta_pole_sub(s, a as f64 / q as f64)?;
        }
    }
    Ok(real_pow_complex(q as f64, -s) * sum)
}

/// Λ(s,χ) = (π/q)^(−(s+κ)/2) Γ((s+κ)/2) L(s,χ) with its factored pieces.
#[derive(Debug, Clone, Copy)]
pub struct CompletedL {
    pub s: Complex64,
    pub raw_l: Complex64,
    pub gamma_factor: Complex64,
    pub completed: Complex64,
}

/// Completed L-function for primitive χ; gamma poles surface as errors.
pub fn completed_lambda(s: Complex64, chi: &DirichletCharacter) -> Result<CompletedL> {
    if !chi.is_primitive() {
        return Err(Error::NotPrimitive(chi.modulus()));
    }
    let q = chi.modulus() as f64;
    let kappa = chi.parity() as f64;
    let half_arg = (s + kappa) / 2.0;
    let gamma = gamma_complex(half_arg)?;
    let gamma_factor = real_pow_complex(std::f64::consts::PI / q, -half_arg) * gamma;
    let raw_l = dirichlet_l(s, chi)?;
    Ok(CompletedL {
        s,
        raw_l,
        gamma_factor,
        completed: gamma_factor * raw_l,
    })
}

/// Root number τ(χ) / (i^κ √q) of the functional equation.
pub fn root_number(chi: &DirichletCharacter) -> Result<Complex64> {
    let tau = gauss_sum(chi)?.value;
    let q = chi.modulus() as f64;
    Ok(tau * i_pow_neg_kappa(chi.parity()) / q.sqrt())
}

/// Normalized defect of Λ(s,χ) = (τ(χ)/(i^κ √q)) Λ(1−s, χ̄).
pub fn functional_equation_defect(s: Complex64, chi: &DirichletCharacter) -> Result<f64> {
    let left = completed_lambda(s, chi)?.completed;
    let right = completed_lambda(Complex64::ONE - s, &chi.conjugate())?.completed;
    let eps = root_number(chi)?;
    Ok((left - eps * right).norm() / (1.0 + left.norm()))
}

/// L, L′ and L′/L at s = 1 with Richardson-extrapolated central differences.
#[derive(Debug, Clone, Copy)]
pub struct LogDerivativeAtOne {
    pub l_one: Complex64,
    pub l_prime: Complex64,
    pub quotient: Complex64,
    /// Central difference at the base step (h = 1e-3).
    pub diff_h: Complex64,
    /// Central difference at the halved step (h = 5e-4).
    pub diff_h_half: Complex64,
}

/// L′/L(1, χ) for non-principal χ mod q ≥ 2 at the default base step 1e-3.
pub fn l_log_derivative_at_one(chi: &DirichletCharacter) -> Result<LogDerivativeAtOne> {
    l_log_derivative_at_one_with_step(chi, 1e-3)
}

/// Same with an explicit base step h (the halved step is h/2).
pub fn l_log_derivative_at_one_with_step(
    chi: &DirichletCharacter,
    h: f64,
) -> Result<LogDerivativeAtOne> {
    if chi.modulus() < 2 || chi.is_principal() {
        return Err(Error::InvalidInput(
            "log-derivative at 1 requires a non-principal character".into(),
        ));
    }
    let one = Complex64::ONE;
    let l_one = dirichlet_l(one, chi)?;
    let central = |step: f64| -> Result<Complex64> {
        let plus = dirichlet_l(one + step, chi)?;
        let minus = dirichlet_l(one - step, chi)?;
        Ok((plus - minus) / (2.0 * step))
    };
    let diff_h = central(h)?;
    let diff_h_half = central(0.5 * h)?;
    let l_prime = (4.0 * diff_h_half - diff_h) / 3.0;
    Ok(LogDerivativeAtOne {
        l_one,
        l_prime,
        quotient: l_prime / l_one,
        diff_h,
        diff_h_half,
    })
}
