//! Dirichlet characters with exact root-of-unity values.
//!
//! A character mod q is stored as a table of rational exponents: the value at
//! a residue a coprime to q is e(k/N) for an exact reduced fraction k/N in
//! [0,1), and ZERO otherwise. All order / parity / conductor logic runs on
//! the exponents; conversion to `Complex64` happens only at evaluation
//! boundaries.

use num_complex::Complex64;
use num_rational::Ratio;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

use crate::arith::{
    crt, divisors, euler_phi, factorize, gcd, lcm, mod_pow, moebius as moebius_int,
    primitive_root_odd_prime_power,
};
use crate::error::{Error, Result};

/// Exact exponent of a root of unity, as a reduced fraction in [0, 1).
pub type Exponent = Ratio<i64>;

fn reduce_mod_one(r: Exponent) -> Exponent {
    let f = r.floor();
    r - f
}

/// e(x) = exp(2πi x).
pub fn unit_e(x: f64) -> Complex64 {
    Complex64::new(0.0, TAU * x).exp()
}

fn exp_to_complex(e: Exponent) -> Complex64 {
    unit_e(*e.numer() as f64 / *e.denom() as f64)
}

/// A Dirichlet character mod q with exact values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirichletCharacter {
    modulus: u64,
    /// exponents[a] = Some(k/N) when gcd(a, q) = 1 and χ(a) = e(k/N); None otherwise.
    exponents: Vec<Option<Exponent>>,
    parity: u8,
    order: u64,
    conductor: u64,
}

/// JSON shape for a character: {modulus, conductor, parity, order, exponent_table}.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CharacterJson {
    pub modulus: u64,
    pub conductor: u64,
    pub parity: u8,
    pub order: u64,
    /// Per-residue exponent as [numerator, denominator], or null off the units.
    pub exponent_table: Vec<Option<(i64, i64)>>,
}

impl DirichletCharacter {
    /// Build from a raw exponent table, computing parity, order and conductor.
    ///
    /// Validates χ(1) = 1, the zero set, and complete multiplicativity
    /// (exactly, on exponents).
    pub fn from_exponent_table(modulus: u64, exponents: Vec<Option<Exponent>>) -> Result<Self> {
        if modulus == 0 || exponents.len() != modulus as usize {
            return Err(Error::InvalidInput(format!(
                "exponent table length {} does not match modulus {}",
                exponents.len(),
                modulus
            )));
        }
        let q = modulus;
        let exps: Vec<Option<Exponent>> = exponents.into_iter().map(|e| e.map(reduce_mod_one)).collect();
        for a in 0..q {
            let coprime = gcd(a, q) == 1 || q == 1;
            if coprime != exps[a as usize].is_some() {
                return Err(Error::InvalidInput(format!(
                    "zero set mismatch at residue {a} mod {q}"
                )));
            }
        }
        if q == 1 {
            if exps[0] != Some(Ratio::zero()) {
                return Err(Error::InvalidInput("character mod 1 must be trivial".into()));
            }
        } else if exps[1] != Some(Ratio::zero()) {
            return Err(Error::InvalidInput("χ(1) must equal 1".into()));
        }
        // Complete multiplicativity on the unit group.
        let units: Vec<u64> = (0..q).filter(|&a| gcd(a, q) == 1 || q == 1).collect();
        for &a in &units {
            for &b in &units {
                let ab = (a * b) % q;
                let sum = reduce_mod_one(exps[a as usize].unwrap() + exps[b as usize].unwrap());
                if exps[ab as usize] != Some(sum) {
                    return Err(Error::InvalidInput(format!(
                        "multiplicativity fails at ({a},{b}) mod {q}"
                    )));
                }
            }
        }
        let mut chi = DirichletCharacter {
            modulus: q,
            exponents: exps,
            parity: 0,
            order: 1,
            conductor: 1,
        };
        chi.parity = if q == 1 {
            0
        } else {
            let e = chi.exponents[(q - 1) as usize].unwrap();
            if e.is_zero() {
                0
            } else if e == Ratio::new(1, 2) {
                1
            } else {
                return Err(Error::InvalidInput("χ(-1) must be ±1".into()));
            }
        };
        chi.order = chi
            .exponents
            .iter()
            .flatten()
            .fold(1u64, |acc, e| lcm(acc, *e.denom() as u64));
        chi.conductor = chi.compute_conductor();
        Ok(chi)
    }

    fn compute_conductor(&self) -> u64 {
        let q = self.modulus;
        // Smallest f | q with χ(a) = 1 for all a ≡ 1 (mod f), gcd(a, q) = 1.
        'outer: for f in divisors(q) {
            let mut a = 1 + f;
            while a < q + 1 {
                let r = a % q;
                if gcd(r, q) == 1 && !self.exponents[r as usize].unwrap().is_zero() {
                    continue 'outer;
                }
                a += f;
            }
            return f;
        }
        q
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn parity(&self) -> u8 {
        self.parity
    }

    /// Order of χ in the character group.
    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor == self.modulus
    }

    pub fn is_principal(&self) -> bool {
        self.order == 1
    }

    pub fn is_quadratic(&self) -> bool {
        self.order == 2
    }

    /// Exact exponent of χ(n), reducing n mod q; None when gcd(n, q) > 1.
    pub fn exponent(&self, n: i64) -> Option<Exponent> {
        let q = self.modulus as i64;
        let a = n.rem_euclid(q) as usize;
        self.exponents[a]
    }

    /// χ(n) as a complex number (0 off the units).
    pub fn value(&self, n: i64) -> Complex64 {
        match self.exponent(n) {
            Some(e) => exp_to_complex(e),
            None => Complex64::ZERO,
        }
    }

    /// Exact value for real characters: Some(-1|0|1) when order ≤ 2.
    pub fn value_as_int(&self, n: i64) -> Option<i64> {
        if self.order > 2 {
            return None;
        }
        Some(match self.exponent(n) {
            None => 0,
            Some(e) if e.is_zero() => 1,
            Some(_) => -1,
        })
    }

    /// χ(-1) = (-1)^κ as a real number.
    pub fn value_at_minus_one(&self) -> f64 {
        if self.parity == 0 {
            1.0
        } else {
            -1.0
        }
    }

    /// The conjugate character χ̄.
    pub fn conjugate(&self) -> DirichletCharacter {
        let exps = self
            .exponents
            .iter()
            .map(|e| e.map(|x| reduce_mod_one(-x)))
            .collect();
        DirichletCharacter {
            modulus: self.modulus,
            exponents: exps,
            parity: self.parity,
            order: self.order,
            conductor: self.conductor,
        }
    }

    /// Evaluation table of complex values, indexed by residue.
    pub fn complex_table(&self) -> Vec<Complex64> {
        (0..self.modulus as i64).map(|a| self.value(a)).collect()
    }

    /// Serializable view.
    pub fn to_json_struct(&self) -> CharacterJson {
        CharacterJson {
            modulus: self.modulus,
            conductor: self.conductor,
            parity: self.parity,
            order: self.order,
            exponent_table: self
                .exponents
                .iter()
                .map(|e| e.map(|x| (*x.numer(), *x.denom())))
                .collect(),
        }
    }

    /// Deterministic sort key: the exponent table ordered lexicographically.
    fn sort_key(&self) -> Vec<Option<Exponent>> {
        self.exponents.clone()
    }
}

/// One prime-power component of the unit group (Z/p^k)^×, with the data
/// needed to read off discrete logarithms.
struct UnitComponent {
    modulus: u64,
    /// Discrete-log table: for residue a coprime to p^k, log[a] = (α, β) with
    /// a ≡ g₁^α · g₂^β; cyclic components use β only.
    log: Vec<Option<(u64, u64)>>,
    /// Orders of (g₁, g₂); cyclic groups have order₁ = 1.
    orders: (u64, u64),
}

impl UnitComponent {
    fn new(p: u64, k: u32) -> Self {
        let m = p.pow(k);
        let mut log = vec![None; m as usize];
        if p == 2 && k >= 3 {
            // (Z/2^k)^× = <-1> × <5>.
            let half = m / 4; // order of 5
            for alpha in 0..2u64 {
                for beta in 0..half {
                    let v = (m - 1).pow(alpha as u32) % m;
                    let a = v * mod_pow(5, beta, m) % m;
                    log[a as usize] = Some((alpha, beta));
                }
            }
            UnitComponent { modulus: m, log, orders: (2, half) }
        } else if p == 2 && k == 2 {
            log[1] = Some((0, 0));
            log[3] = Some((0, 1));
            UnitComponent { modulus: m, log, orders: (1, 2) }
        } else if p == 2 && k == 1 {
            log[1] = Some((0, 0));
            UnitComponent { modulus: m, log, orders: (1, 1) }
        } else {
            let g = primitive_root_odd_prime_power(p, k);
            let phi = euler_phi(m);
            let mut a = 1u64;
            for beta in 0..phi {
                log[a as usize] = Some((0, beta));
                a = a * g % m;
            }
            UnitComponent { modulus: m, log, orders: (1, phi) }
        }
    }

    /// Exponent tables (index → character exponent) for the primitive
    /// characters of this component, as (ε on g₁, j on g₂) index pairs.
    fn primitive_character_indices(&self, p: u64, k: u32) -> Vec<(u64, u64)> {
        let mut out = Vec::new();
        if p == 2 {
            match k {
                1 => {} // no primitive character mod 2
                2 => out.push((0, 1)),
                _ => {
                    for eps in 0..2u64 {
                        let mut j = 1;
                        while j < self.orders.1 {
                            out.push((eps, j));
                            j += 2;
                        }
                    }
                }
            }
        } else if k == 1 {
            for j in 1..self.orders.1 {
                out.push((0, j));
            }
        } else {
            for j in 1..self.orders.1 {
                if j % p != 0 {
                    out.push((0, j));
                }
            }
        }
        out
    }

    /// Exponent of the (ε, j)-indexed character at residue a.
    fn exponent_at(&self, idx: (u64, u64), a: u64) -> Option<Exponent> {
        let (alpha, beta) = self.log[(a % self.modulus) as usize]?;
        let (o1, o2) = self.orders;
        let mut e = Ratio::new((idx.1 * beta) as i64, o2 as i64);
        if o1 > 1 {
            e += Ratio::new((idx.0 * alpha) as i64, o1 as i64);
        }
        Some(reduce_mod_one(e))
    }
}

/// Enumerate the primitive Dirichlet characters mod q in a deterministic
/// order (lexicographic on the exact exponent tables).
///
/// q = 1 yields the trivial character; q ≡ 2 (mod 4) yields none.
pub fn enumerate_primitive_characters(q: u64) -> Vec<DirichletCharacter> {
    assert!(q >= 1, "modulus must be positive");
    if q == 1 {
        return vec![DirichletCharacter {
            modulus: 1,
            exponents: vec![Some(Ratio::zero())],
            parity: 0,
            order: 1,
            conductor: 1,
        }];
    }
    let factors = factorize(q);
    let comps: Vec<(u64, u32, UnitComponent)> = factors
        .iter()
        .map(|&(p, k)| (p, k, UnitComponent::new(p, k)))
        .collect();
    let index_lists: Vec<Vec<(u64, u64)>> = comps
        .iter()
        .map(|(p, k, c)| c.primitive_character_indices(*p, *k))
        .collect();
    if index_lists.iter().any(|l| l.is_empty()) {
        return Vec::new();
    }

    let mut chars = Vec::new();
    let mut choice = vec![0usize; comps.len()];
    loop {
        let mut exps: Vec<Option<Exponent>> = vec![None; q as usize];
        for a in 0..q {
            if gcd(a, q) != 1 {
                continue;
            }
            let mut e = Ratio::zero();
            for (ci, (_, _, comp)) in comps.iter().enumerate() {
                let idx = index_lists[ci][choice[ci]];
                e += comp.exponent_at(idx, a % comp.modulus).expect("unit residue");
            }
            exps[a as usize] = Some(reduce_mod_one(e));
        }
        let parity = {
            let e = exps[(q - 1) as usize].unwrap();
            if e.is_zero() {
                0
            } else {
                1
            }
        };
        let order = exps
            .iter()
            .flatten()
            .fold(1u64, |acc, e| lcm(acc, *e.denom() as u64));
        chars.push(DirichletCharacter {
            modulus: q,
            exponents: exps,
            parity,
            order,
            conductor: q,
        });

        // Odometer over component character choices.
        let mut i = 0;
        loop {
            if i == comps.len() {
                chars.sort_by_key(|a| a.sort_key());
                return chars;
            }
            choice[i] += 1;
            if choice[i] < index_lists[i].len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

/// Result of a Gauss-sum evaluation.
#[derive(Debug, Clone, Copy)]
pub struct GaussSum {
    /// τ(χ) = Σ_{a mod q} χ(a) e(a/q).
    pub value: Complex64,
    /// |conj(τ(χ̄)) − χ(−1) τ(χ)|, which vanishes for primitive χ.
    pub conjugation_defect: f64,
}

/// Gauss sum of a primitive character.
pub fn gauss_sum(chi: &DirichletCharacter) -> Result<GaussSum> {
    if !chi.is_primitive() {
        return Err(Error::NotPrimitive(chi.modulus()));
    }
    let q = chi.modulus();
    let tau = direct_gauss_sum(chi);
    let tau_conj_char = direct_gauss_sum(&chi.conjugate());
    let defect = (tau_conj_char.conj() - chi.value_at_minus_one() * tau).norm();
    let _ = q;
    Ok(GaussSum { value: tau, conjugation_defect: defect })
}

fn direct_gauss_sum(chi: &DirichletCharacter) -> Complex64 {
    let q = chi.modulus();
    let mut s = Complex64::ZERO;
    for a in 0..q {
        if let Some(e) = chi.exponent(a as i64) {
            let total = e + Ratio::new(a as i64, q as i64);
            s += exp_to_complex(reduce_mod_one(total));
        }
    }
    s
}

/// Split a primitive χ mod q = v·w (coprime parts) into primitive χ_v · χ_w.
pub fn decompose(
    chi: &DirichletCharacter,
    v: u64,
) -> Result<(DirichletCharacter, DirichletCharacter)> {
    let q = chi.modulus();
    if !chi.is_primitive() {
        return Err(Error::NotPrimitive(q));
    }
    if v == 0 || !q.is_multiple_of(v) {
        return Err(Error::InvalidInput(format!("{v} does not divide {q}")));
    }
    let w = q / v;
    if gcd(v, w) != 1 {
        return Err(Error::InvalidInput(format!(
            "factors {v} and {w} are not coprime"
        )));
    }
    let component = |m: u64, other: u64| -> Result<DirichletCharacter> {
        if m == 1 {
            return Ok(enumerate_primitive_characters(1).pop().unwrap());
        }
        let mut exps: Vec<Option<Exponent>> = vec![None; m as usize];
        for a in 0..m {
            if gcd(a, m) != 1 {
                continue;
            }
            // Lift a to b ≡ a (mod m), b ≡ 1 (mod other).
            let b = crt(a, m, 1 % other, other) % q.max(1);
            exps[a as usize] = chi.exponent(b as i64);
        }
        DirichletCharacter::from_exponent_table(m, exps)
    };
    let chi_v = component(v, w)?;
    let chi_w = component(w, v)?;
    Ok((chi_v, chi_w))
}

/// σ_s(m, χ) = Σ_{d | m} d^s χ(m/d) and its ingredients.
#[derive(Debug, Clone, Copy)]
pub struct TwistedDivisorSum {
    pub m: u64,
    pub s: Complex64,
    pub value: Complex64,
}

/// Twisted divisor sum by exact divisor enumeration.
pub fn sigma_twisted(m: u64, s: Complex64, chi: &DirichletCharacter) -> TwistedDivisorSum {
    assert!(m >= 1);
    let mut value = Complex64::ZERO;
    for d in divisors(m) {
        let chi_val = chi.value((m / d) as i64);
        if chi_val != Complex64::ZERO {
            let d_pow = if s == Complex64::ZERO {
                Complex64::ONE
            } else {
                (s * (d as f64).ln()).exp()
            };
            value += d_pow * chi_val;
        }
    }
    TwistedDivisorSum { m, s, value }
}

/// σ_0(m, χ) for a real (order ≤ 2) character, exactly.
pub fn sigma0_real_exact(m: u64, chi: &DirichletCharacter) -> i64 {
    debug_assert!(chi.order() <= 2);
    divisors(m)
        .into_iter()
        .map(|d| chi.value_as_int(d as i64).expect("real character"))
        .sum()
}

/// Both sides of the character-sum identity
/// Σ_{d mod c, (c,d)=1} χ(d) e(md/c)
///   = χ(sgn m) τ(χ) Σ_{d | (|m|, c/q)} d χ̄(|m|/d) χ(c/(dq)) μ(c/(dq)).
pub fn char_sum_pair(
    chi: &DirichletCharacter,
    m: i64,
    c: u64,
) -> Result<(Complex64, Complex64)> {
    if !chi.is_primitive() {
        return Err(Error::NotPrimitive(chi.modulus()));
    }
    if m == 0 {
        return Err(Error::InvalidInput("m must be nonzero".into()));
    }
    let q = chi.modulus();
    if c == 0 || !c.is_multiple_of(q) {
        return Err(Error::InvalidInput(format!("c = {c} is not a positive multiple of q = {q}")));
    }

    // Direct side.
    let mut lhs = Complex64::ZERO;
    for d in 0..c {
        if gcd(c, d) == 1 || c == 1 {
            let chi_d = chi.value(d as i64);
            if chi_d != Complex64::ZERO {
                let frac = Ratio::new((m.rem_euclid(c as i64)) * d as i64, c as i64);
                lhs += chi_d * exp_to_complex(reduce_mod_one(frac));
            }
        }
    }

    // Divisor side.
    let m_abs = m.unsigned_abs();
    let sign_factor = if m > 0 {
        Complex64::ONE
    } else {
        Complex64::new(chi.value_at_minus_one(), 0.0)
    };
    let tau = gauss_sum(chi)?.value;
    let chi_bar = chi.conjugate();
    let mut sum = Complex64::ZERO;
    for d in divisors(gcd(m_abs, c / q)) {
        let mu = moebius_int(c / (d * q));
        if mu == 0 {
            continue;
        }
        let term = chi_bar.value((m_abs / d) as i64) * chi.value((c / (d * q)) as i64);
        sum += d as f64 * mu as f64 * term;
    }
    let rhs = sign_factor * tau * sum;
    Ok((lhs, rhs))
}

/// Möbius function (re-export with the character module's conventions).
pub fn moebius(n: u64) -> i64 {
    moebius_int(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn modulus_one_is_trivial() {
        let chars = enumerate_primitive_characters(1);
        assert_eq!(chars.len(), 1);
        let chi = &chars[0];
        assert_eq!(chi.parity(), 0);
        assert_eq!(chi.order(), 1);
        assert_eq!(chi.conductor(), 1);
        assert_eq!(chi.value(5), Complex64::ONE);
    }

    #[test]
    fn modulus_two_has_no_primitive_character() {
        assert!(enumerate_primitive_characters(2).is_empty());
        assert!(enumerate_primitive_characters(6).is_empty());
    }

    /// Brute-force oracle: all completely multiplicative unit maps to roots
    /// of unity for tiny q, filtered for primitivity by direct induction.
    fn brute_force_characters(q: u64) -> Vec<Vec<Option<Exponent>>> {
        let units: Vec<u64> = (1..q).filter(|&a| gcd(a, q) == 1).collect();
        let phi = units.len() as u64;
        let mut found = Vec::new();
        let mut assignment = vec![0u64; units.len()];
        'outer: loop {
            let mut table: Vec<Option<Exponent>> = vec![None; q as usize];
            for (i, &a) in units.iter().enumerate() {
                table[a as usize] = Some(reduce_mod_one(Ratio::new(assignment[i] as i64, phi as i64)));
            }
            let ok = units.iter().all(|&a| {
                units.iter().all(|&b| {
                    let ab = (a * b) % q;
                    table[ab as usize]
                        == Some(reduce_mod_one(
                            table[a as usize].unwrap() + table[b as usize].unwrap(),
                        ))
                })
            });
            if ok {
                found.push(table);
            }
            let mut i = 0;
            loop {
                if i == assignment.len() {
                    break 'outer;
                }
                assignment[i] += 1;
                if assignment[i] < phi {
                    break;
                }
                assignment[i] = 0;
                i += 1;
            }
        }
        found
    }

    fn is_primitive_table(q: u64, table: &[Option<Exponent>]) -> bool {
        // χ is induced mod f iff it is trivial on {a ≡ 1 mod f}.
        for f in divisors(q) {
            if f == q {
                continue;
            }
            let trivial_on_kernel = (0..q)
                .filter(|&a| gcd(a, q) == 1 && a % f == 1 % f)
                .all(|a| table[a as usize].unwrap().is_zero());
            if trivial_on_kernel {
                return false;
            }
        }
        true
    }

    #[test]
    fn q4_matches_brute_force() {
        let all = brute_force_characters(4);
        assert_eq!(all.len(), 2);
        let prim: Vec<_> = all.iter().filter(|t| is_primitive_table(4, t)).collect();
        assert_eq!(prim.len(), 1);

        let chars = enumerate_primitive_characters(4);
        assert_eq!(chars.len(), 1);
        let chi = &chars[0];
        assert_eq!(chi.parity(), 1);
        assert_eq!(chi.order(), 2);
        assert_eq!(chi.conductor(), 4);
        assert_eq!(chi.exponent(3), prim[0][3]);
    }

    #[test]
    fn q8_matches_brute_force() {
        let all = brute_force_characters(8);
        let prim: Vec<_> = all.iter().filter(|t| is_primitive_table(8, t)).collect();
        assert_eq!(prim.len(), 2);

        let chars = enumerate_primitive_characters(8);
        assert_eq!(chars.len(), 2);
        for chi in &chars {
            assert!(chi.is_quadratic());
            assert!(prim.iter().any(|t| {
                (0..8).all(|a| chi.exponent(a) == t[a as usize])
            }));
        }
    }

    #[test]
    fn enumeration_is_sorted_and_counts_match() {
        for q in [3u64, 5, 7, 9, 12, 15, 16, 24, 35, 40] {
            let chars = enumerate_primitive_characters(q);
            let expected: u64 = factorize(q)
                .into_iter()
                .map(|(p, k)| {
                    if p == 2 {
                        match k {
                            1 => 0,
                            2 => 1,
                            _ => 2u64.pow(k - 2),
                        }
                    } else if k == 1 {
                        p - 2
                    } else {
                        euler_phi(p.pow(k)) - euler_phi(p.pow(k - 1))
                    }
                })
                .product();
            assert_eq!(chars.len() as u64, expected, "q={q}");
            let keys: Vec<_> = chars.iter().map(|c| c.sort_key()).collect();
            let mut sorted = keys.clone();
            sorted.sort();
            assert_eq!(keys, sorted, "q={q} enumeration order");
            for chi in &chars {
                assert!(chi.is_primitive());
                assert_eq!(chi.value(1), Complex64::ONE);
            }
        }
    }

    #[test]
    fn multiplicativity_is_exact_on_exponents() {
        for q in [5u64, 8, 12, 21] {
            for chi in enumerate_primitive_characters(q) {
                for a in 0..q as i64 {
                    for b in 0..q as i64 {
                        match (chi.exponent(a), chi.exponent(b)) {
                            (Some(ea), Some(eb)) => {
                                assert_eq!(
                                    chi.exponent(a * b),
                                    Some(reduce_mod_one(ea + eb)),
                                    "q={q} a={a} b={b}"
                                );
                            }
                            _ => assert!(chi.exponent(a * b).is_none() || gcd((a * b).rem_euclid(q as i64) as u64, q) == 1),
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn gauss_sum_q1_and_q4() {
        let chi1 = &enumerate_primitive_characters(1)[0];
        let g1 = gauss_sum(chi1).unwrap();
        assert_abs_diff_eq!(g1.value.re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(g1.value.im, 0.0, epsilon = 1e-15);

        // τ(χ₄) = e(1/4) − e(3/4) = 2i by the direct four-term sum.
        let chi4 = &enumerate_primitive_characters(4)[0];
        let g4 = gauss_sum(chi4).unwrap();
        assert_abs_diff_eq!(g4.value.re, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(g4.value.im, 2.0, epsilon = 1e-12);
        assert!(g4.conjugation_defect < 1e-12);
    }

    #[test]
    fn gauss_sum_modulus_sqrt_q() {
        for q in [5u64, 7, 8, 9, 12, 13] {
            for chi in enumerate_primitive_characters(q) {
                let g = gauss_sum(&chi).unwrap();
                assert_abs_diff_eq!(g.value.norm(), (q as f64).sqrt(), epsilon = 1e-12);
                assert!(g.conjugation_defect < 1e-12);
            }
        }
    }

    #[test]
    fn gauss_sum_rejects_imprimitive() {
        // The principal character mod 3 is not primitive.
        let table = vec![None, Some(Ratio::zero()), Some(Ratio::zero())];
        let chi = DirichletCharacter::from_exponent_table(3, table).unwrap();
        assert!(!chi.is_primitive());
        assert!(matches!(gauss_sum(&chi), Err(Error::NotPrimitive(3))));
    }

    #[test]
    fn decompose_q12_and_q15() {
        for chi in enumerate_primitive_characters(12) {
            let (cv, cw) = decompose(&chi, 3).unwrap();
            assert_eq!(cv.modulus(), 3);
            assert_eq!(cw.modulus(), 4);
            assert!(cv.is_primitive() && cw.is_primitive());
            assert!(cv.is_quadratic() && cw.is_quadratic());
            for a in 0..12i64 {
                if gcd(a.rem_euclid(12) as u64, 12) == 1 {
                    let prod = cv.value(a) * cw.value(a);
                    assert!((chi.value(a) - prod).norm() < 1e-14, "a={a}");
                }
            }
        }
        for chi in enumerate_primitive_characters(15) {
            let (cv, cw) = decompose(&chi, 3).unwrap();
            assert!(cv.is_primitive() && cw.is_primitive());
            for a in 0..15i64 {
                if gcd(a.rem_euclid(15) as u64, 15) == 1 {
                    assert!((chi.value(a) - cv.value(a) * cw.value(a)).norm() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn decompose_trivial_factor() {
        let chi = &enumerate_primitive_characters(5)[0];
        let (cv, cw) = decompose(chi, 1).unwrap();
        assert_eq!(cv.modulus(), 1);
        assert_eq!(cw.modulus(), 5);
        for a in 0..5i64 {
            assert!((cw.value(a) - chi.value(a)).norm() < 1e-15);
        }
    }

    #[test]
    fn decompose_rejects_bad_factors() {
        let chi = &enumerate_primitive_characters(12)[0];
        assert!(decompose(chi, 5).is_err()); // not a divisor
        assert!(decompose(chi, 2).is_err()); // 2 and 6 share a factor
    }

    #[test]
    fn sigma_twisted_examples() {
        let chi3 = &enumerate_primitive_characters(3)[0];
        let s0 = sigma_twisted(1, Complex64::ZERO, chi3);
        assert_abs_diff_eq!(s0.value.re, 1.0, epsilon = 1e-15);

        // σ_0(p, χ) = 1 + χ(p) for prime p ∤ q.
        for chi in enumerate_primitive_characters(7) {
            for p in [2i64, 3, 5, 11, 13] {
                let v = sigma_twisted(p as u64, Complex64::ZERO, &chi).value;
                let expected = Complex64::ONE + chi.value(p);
                assert!((v - expected).norm() < 1e-13);
            }
        }

        // χ quadratic mod 3: σ_0(4, χ) = χ(4) + χ(2) + χ(1) = 1 − 1 + 1 = 1.
        let v = sigma_twisted(4, Complex64::ZERO, chi3).value;
        assert_abs_diff_eq!(v.re, 1.0, epsilon = 1e-13);
        assert_abs_diff_eq!(v.im, 0.0, epsilon = 1e-13);
        assert_eq!(sigma0_real_exact(4, chi3), 1);
    }

    #[test]
    fn sigma0_square_values_at_least_one() {
        for q in [3u64, 4, 5, 8, 11] {
            for chi in enumerate_primitive_characters(q) {
                if !chi.is_quadratic() {
                    continue;
                }
                for m in 1..=1000u64 {
                    assert!(
                        sigma0_real_exact(m * m, &chi) >= 1,
                        "q={q} m={m}"
                    );
                }
            }
        }
    }

    #[test]
    fn char_sum_identity_reduces_to_gauss_sum() {
        for q in [3u64, 5, 8] {
            for chi in enumerate_primitive_characters(q) {
                let (lhs, rhs) = char_sum_pair(&chi, 1, q).unwrap();
                let tau = gauss_sum(&chi).unwrap().value;
                assert!((lhs - tau).norm() < 1e-12);
                assert!((rhs - tau).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn char_sum_identity_small_cases() {
        let chi3 = &enumerate_primitive_characters(3)[0];
        let (l, r) = char_sum_pair(chi3, 1, 6).unwrap();
        assert!((l - r).norm() < 1e-12);

        for chi in enumerate_primitive_characters(5) {
            let (l, r) = char_sum_pair(&chi, -3, 10).unwrap();
            assert!((l - r).norm() < 1e-12, "q=5 m=-3 c=10");
        }
    }

    #[test]
    fn char_sum_rejects_bad_c() {
        let chi3 = &enumerate_primitive_characters(3)[0];
        assert!(char_sum_pair(chi3, 1, 7).is_err());
        assert!(char_sum_pair(chi3, 0, 6).is_err());
    }

    #[test]
    fn conjugate_inverts_exponents() {
        for chi in enumerate_primitive_characters(5) {
            let bar = chi.conjugate();
            for a in 0..5i64 {
                let prod = chi.value(a) * bar.value(a);
                if chi.exponent(a).is_some() {
                    assert!((prod - Complex64::ONE).norm() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn json_shape_roundtrip() {
        let chi = &enumerate_primitive_characters(12)[0];
        let js = chi.to_json_struct();
        let text = serde_json::to_string(&js).unwrap();
        let back: CharacterJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.modulus, 12);
        assert_eq!(back.conductor, 12);
        assert_eq!(back.order, 2);
        assert_eq!(back.exponent_table.len(), 12);
    }

    #[test]
    fn moebius_exported() {
        assert_eq!(moebius(1), 1);
        assert_eq!(moebius(6), 1);
        assert_eq!(moebius(12), 0);
    }
}
