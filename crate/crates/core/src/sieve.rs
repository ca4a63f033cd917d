//! Prime counting in progressions and the restricted divisor-sum estimates:
//! the perfect-square floor for quadratic characters, the
//! Balasubramanian–Ramachandra parameter algebra for complex ones, the
//! Brun–Titchmarsh check, and the quadratic-character diagnostic.

use num_complex::Complex64;
use num_rational::Ratio;
use serde::Serialize;

use crate::arith::{euler_phi, gcd};
use crate::characters::DirichletCharacter;
use crate::error::{Error, Result};

/// Hard cap on the divisor-sieve range (memory guard).
const MAX_DIVISOR_RANGE: u64 = 40_000_000;

/// Bit-set sieve of Eratosthenes with a cached prime list.
pub struct PrimeTable {
    limit: u64,
    words: Vec<u64>,
    primes: Vec<u64>,
}

impl PrimeTable {
    pub fn new(limit: u64) -> Self {
        let n = limit as usize;
        let mut words = vec![u64::MAX; n / 64 + 1];
        let clear = |words: &mut Vec<u64>, i: usize| words[i / 64] &= !(1 << (i % 64));
        clear(&mut words, 0);
        if n >= 1 {
            clear(&mut words, 1);
        }
        let mut p = 2usize;
        while p * p <= n {
            if words[p / 64] >> (p % 64) & 1 == 1 {
                let mut j = p * p;
                while j <= n {
                    clear(&mut words, j);
                    j += p;
                }
            }
            p += 1;
        }
        let primes = (2..=n)
            .filter(|&i| words[i / 64] >> (i % 64) & 1 == 1)
            .map(|i| i as u64)
            .collect();
        PrimeTable { limit, words, primes }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn is_prime(&self, n: u64) -> bool {
        n <= self.limit && self.words[(n / 64) as usize] >> (n % 64) & 1 == 1
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// π(x): number of primes ≤ x.
    pub fn pi(&self, x: u64) -> Result<u64> {
        if x > self.limit {
            return Err(Error::CapExceeded(format!(
                "pi({x}) exceeds the table limit {}",
                self.limit
            )));
        }
        Ok(self.primes.partition_point(|&p| p <= x) as u64)
    }

    /// π(x; q, a): primes ≤ x congruent to a mod q (gcd(a, q) = 1 required).
    pub fn pi_progression(&self, x: u64, q: u64, a: u64) -> Result<u64> {
        if x > self.limit {
            return Err(Error::CapExceeded(format!(
                "pi({x}; {q}, {a}) exceeds the table limit {}",
                self.limit
            )));
        }
        if gcd(a % q, q) != 1 {
            return Err(Error::InvalidInput(format!("gcd({a}, {q}) != 1")));
        }
        let a = a % q;
        let mut count = 0u64;
        for &p in &self.primes {
            if p > x {
                break;
            }
            if p % q == a {
                count += 1;
            }
        }
        Ok(count)
    }

    /// One pass over (lo, hi]: counts per residue class mod q.
    pub fn counts_by_residue(&self, q: u64, lo: u64, hi: u64) -> Result<Vec<u64>> {
        if hi > self.limit {
            return Err(Error::CapExceeded(format!(
                "range end {hi} exceeds the table limit {}",
                self.limit
            )));
        }
        let mut counts = vec![0u64; q as usize];
        let start = self.primes.partition_point(|&p| p <= lo);
        for &p in &self.primes[start..] {
            if p > hi {
                break;
            }
            counts[(p % q) as usize] += 1;
        }
        Ok(counts)
    }

    /// Agreement with trial division on an initial segment.
    pub fn self_test(&self, up_to: u64) -> bool {
        let trial = |n: u64| -> bool {
            if n < 2 {
                return false;
            }
            let mut d = 2;
            while d * d <= n {
                if n.is_multiple_of(d) {
                    return false;
                }
                d += 1;
            }
            true
        };
        (0..=up_to.min(self.limit)).all(|n| self.is_prime(n) == trial(n))
    }
}

/// π(limit; q, a) as a standalone operation.
pub fn prime_counts(table: &PrimeTable, limit: u64, q: u64, a: u64) -> Result<u64> {
    table.pi_progression(limit, q, a)
}

/// Σ_{T ≤ m ≤ 2T} |σ_0(m, χ)|² by a divisor sieve (outer loop over the
/// divisor, inner over its multiples). Real characters accumulate in exact
/// integer arithmetic.
pub fn restricted_sigma_sum(chi: &DirichletCharacter, t_lower: u64) -> Result<f64> {
    let hi = 2 * t_lower;
    if hi > MAX_DIVISOR_RANGE {
        return Err(Error::CapExceeded(format!(
            "divisor sieve range 2T = {hi} exceeds {MAX_DIVISOR_RANGE}"
        )));
    }
    if t_lower == 0 {
        return Err(Error::InvalidInput("T must be positive".into()));
    }
    let lo = t_lower;
    let q = chi.modulus();
    let len = (hi - lo + 1) as usize;
    if chi.order() <= 2 {
        let table: Vec<i64> = (0..q as i64).map(|a| chi.value_as_int(a).unwrap()).collect();
        let mut acc = vec![0i64; len];
        for e in 1..=hi {
            let v = table[(e % q) as usize];
            if v == 0 {
                continue;
            }
            let mut m = lo.div_ceil(e) * e;
            while m <= hi {
                acc[(m - lo) as usize] += v;
                m += e;
            }
        }
        Ok(acc.iter().map(|&s| (s * s) as f64).sum())
    } else {
        let table: Vec<Complex64> = chi.complex_table();
        let mut acc = vec![Complex64::ZERO; len];
        for e in 1..=hi {
            let v = table[(e % q) as usize];
            if v == Complex64::ZERO {
                continue;
            }
            let mut m = lo.div_ceil(e) * e;
            while m <= hi {
                acc[(m - lo) as usize] += v;
                m += e;
            }
        }
        Ok(acc.iter().map(|s| s.norm_sqr()).sum())
    }
}

/// Both sides of the prime-restricted identity
/// Σ_{T < p ≤ 2T} |1 + χ(p)|² = 2 Σ_a (1 + Re χ(a)) (π(2T;q,a) − π(T;q,a)).
pub fn prime_restricted_identity(
    chi: &DirichletCharacter,
    t_lower: u64,
    table: &PrimeTable,
) -> Result<(f64, f64)> {
    let q = chi.modulus();
    let hi = 2 * t_lower;
    if hi > table.limit() {
        return Err(Error::CapExceeded(format!(
            "2T = {hi} exceeds the prime table limit {}",
            table.limit()
        )));
    }
    let values = chi.complex_table();
    let start = table.primes().partition_point(|&p| p <= t_lower);
    let mut direct = 0.0f64;
    for &p in &table.primes()[start..] {
        if p > hi {
            break;
        }
        let v = values[(p % q) as usize];
        direct += (Complex64::ONE + v).norm_sqr();
    }
    let counts = table.counts_by_residue(q, t_lower, hi)?;
    let mut progression = 0.0f64;
    for a in 0..q {
        if gcd(a, q) == 1 || q == 1 {
            progression += 2.0 * (1.0 + values[a as usize].re) * counts[a as usize] as f64;
        }
    }
    Ok((direct, progression))
}

/// One Brun–Titchmarsh evaluation: observed count in (x, x+y] against
/// 2y/(φ(q) log(y/q)) (1 + 8/log(y/q)).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct BrunTitchmarshCheck {
    pub observed: u64,
    pub bound: f64,
    pub ok: bool,
}

pub fn brun_titchmarsh_check(
    table: &PrimeTable,
    q: u64,
    a: u64,
    x: u64,
    y: u64,
) -> Result<BrunTitchmarshCheck> {
    if gcd(a % q, q) != 1 {
        return Err(Error::InvalidInput(format!("gcd({a}, {q}) != 1")));
    }
    if x < 2 {
        return Err(Error::InvalidInput("x must be at least 2".into()));
    }
    if y < 2 * q {
        return Err(Error::InvalidInput(format!(
            "Brun–Titchmarsh requires y >= 2q (y = {y}, q = {q})"
        )));
    }
    let observed = table.pi_progression(x + y, q, a)? - table.pi_progression(x, q, a)?;
    let log_ratio = (y as f64 / q as f64).ln();
    let bound = 2.0 * y as f64 / (euler_phi(q) as f64 * log_ratio) * (1.0 + 8.0 / log_ratio);
    Ok(BrunTitchmarshCheck { observed, bound, ok: (observed as f64) <= bound })
}

/// Exact-rational parameters of the restricted-sum lower bound for a
/// character of order Q ≥ 3: δ = 1/10, M = ⌊(1+4δ)/(2(1+δ)) · Q/2 + 1/2⌋,
/// X = (Q − 2M)/Q, and the slack 1 − δ − 2(1+δ)X + 2(1+δ)/Q ≥ δ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BalRamParams {
    pub order: u64,
    pub delta: Ratio<i64>,
    pub m_cutoff: i64,
    pub x_ratio: Ratio<i64>,
    pub slack: Ratio<i64>,
}

pub fn bal_ram_parameters(order: u64) -> Result<BalRamParams> {
    if order < 3 {
        return Err(Error::InvalidInput(format!(
            "parameter optimisation needs order Q >= 3, got {order}"
        )));
    }
    let q = order as i64;
    let delta: Ratio<i64> = Ratio::new(1, 10);
    let one: Ratio<i64> = Ratio::from_integer(1);
    let two: Ratio<i64> = Ratio::from_integer(2);
    let four: Ratio<i64> = Ratio::from_integer(4);
    // (1+4δ)/(2(1+δ)) = 7/11.
    let coeff = (one + four * delta) / (two * (one + delta));
    let m_cutoff = (coeff * Ratio::new(q, 2) + Ratio::new(1, 2)).floor().to_integer();
    let x_ratio = Ratio::new(q - 2 * m_cutoff, q);
    let slack =
        one - delta - two * (one + delta) * x_ratio + two * (one + delta) / Ratio::from_integer(q);

    let params = BalRamParams { order, delta, m_cutoff, x_ratio, slack };
    // Exact invariant chain.
    if !(1 <= m_cutoff && m_cutoff <= q / 2) {
        return Err(Error::InvalidInput(format!("M = {m_cutoff} out of range for Q = {order}")));
    }
    if x_ratio < Ratio::new(1, 33) || x_ratio > Ratio::new(23, 33) {
        return Err(Error::InvalidInput(format!("X = {x_ratio} outside [1/33, 23/33]")));
    }
    if slack < delta {
        return Err(Error::InvalidInput(format!("slack {slack} below delta")));
    }
    Ok(params)
}

/// Realized constants for the complex-character lower bound at T = q^K
/// (capped): the restricted sum, the predicted floor 2(1−cos πX)·δ·T/log T,
/// their ratio, and the prime-count check π(2T)−π(T) ≥ (1−δ)T/log T.
#[derive(Debug, Clone, Serialize)]
pub struct ComplexLowerRecord {
    pub q: u64,
    pub chi_id: usize,
    pub order: u64,
    pub t_used: u64,
    /// True when q^K exceeded the cap and T was clamped (result is partial).
    pub capped: bool,
    pub restricted_sum: f64,
    pub predicted_floor: f64,
    pub realized_ratio: f64,
    pub prime_count_ok: bool,
}

pub fn complex_lower_constant(
    chi: &DirichletCharacter,
    chi_id: usize,
    big_k: u32,
    cap: u64,
    table: &PrimeTable,
) -> Result<ComplexLowerRecord> {
    let q = chi.modulus();
    if chi.order() < 3 {
        return Err(Error::InvalidInput(
            "complex lower bound applies to characters of order >= 3".into(),
        ));
    }
    let t_exact = q.checked_pow(big_k);
    let (t_used, capped) = match t_exact {
        Some(t) if t <= cap => (t, false),
        _ => (cap, true),
    };
    let params = bal_ram_parameters(chi.order())?;
    let x = *params.x_ratio.numer() as f64 / *params.x_ratio.denom() as f64;
    let delta = 0.1f64;
    let t = t_used as f64;
    let predicted_floor = 2.0 * (1.0 - (std::f64::consts::PI * x).cos()) * delta * t / t.ln();
    let restricted_sum = restricted_sigma_sum(chi, t_used)?;
    let prime_count_ok = if 2 * t_used <= table.limit() {
        let count = (table.pi(2 * t_used)? - table.pi(t_used)?) as f64;
        count >= (1.0 - delta) * t / t.ln()
    } else {
        false
    };
    Ok(ComplexLowerRecord {
        q,
        chi_id,
        order: chi.order(),
        t_used,
        capped,
        restricted_sum,
        predicted_floor,
        realized_ratio: restricted_sum / predicted_floor,
        prime_count_ok,
    })
}

/// CSV rows for complex-lower-bound records: q,chi_id,Q,T,sum,floor,ratio.
pub fn complex_lower_csv(records: &[ComplexLowerRecord]) -> String {
    let mut out = String::from("q,chi_id,Q,T,sum,floor,ratio\n");
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.q, r.chi_id, r.order, r.t_used, r.restricted_sum, r.predicted_floor, r.realized_ratio
        ));
    }
    out
}

/// Diagnostic for quadratic characters: the prime-restricted sum equals
/// 2(π(2T)−π(T)) − 2Σ_{χ(a)=−1}(π(2T;q,a)−π(T;q,a)); Brun–Titchmarsh alone
/// cannot make the guaranteed floor positive.
#[derive(Debug, Clone, Serialize)]
pub struct QuadraticDiagnostic {
    pub q: u64,
    pub t_used: u64,
    /// 2(π(2T) − π(T)).
    pub first_term: f64,
    /// 2 Σ_{χ(a) = −1} (π(2T;q,a) − π(T;q,a)) — always ≥ 0.
    pub subtracted_term: f64,
    /// Actual prime-restricted sum: first_term − subtracted_term.
    pub actual: f64,
    /// Brun–Titchmarsh upper estimate of the subtracted term.
    pub bt_estimate: f64,
    /// first_term − bt_estimate; may be negative (that is the point).
    pub guaranteed_floor: f64,
}

pub fn quadratic_diagnostic(
    chi: &DirichletCharacter,
    t_lower: u64,
    table: &PrimeTable,
) -> Result<QuadraticDiagnostic> {
    if !chi.is_quadratic() {
        return Err(Error::InvalidInput("diagnostic requires a quadratic character".into()));
    }
    let q = chi.modulus();
    let hi = 2 * t_lower;
    let first_term = 2.0 * (table.pi(hi)? - table.pi(t_lower)?) as f64;
    let counts = table.counts_by_residue(q, t_lower, hi)?;
    let mut subtracted = 0.0f64;
    let mut negative_classes = 0u64;
    for a in 0..q {
        if chi.value_as_int(a as i64) == Some(-1) {
            subtracted += 2.0 * counts[a as usize] as f64;
            negative_classes += 1;
        }
    }
    let log_ratio = (t_lower as f64 / q as f64).ln();
    let per_class =
        2.0 * t_lower as f64 / (euler_phi(q) as f64 * log_ratio) * (1.0 + 8.0 / log_ratio);
    let bt_estimate = 2.0 * negative_classes as f64 * per_class;
    Ok(QuadraticDiagnostic {
        q,
        t_used: t_lower,
        first_term,
        subtracted_term: subtracted,
        actual: first_term - subtracted,
        bt_estimate,
        guaranteed_floor: first_term - bt_estimate,
    })
}
