//! Rational approximation of 4-adic digit streams.
//!
//! A periodic quaternary sequence is the 4-adic expansion of the reduced
//! fraction -U(4)/(4^N - 1). The attack below reconstructs that fraction
//! from a digit prefix d_0..d_{k-1}: every pair (f, g) with g odd and
//! f = g * alpha_k (mod 4^k), alpha_k = sum d_j 4^j, generates the prefix,
//! and the attacker wants the pair minimizing max(|f|, |g|). Such pairs form
//! the rank-2 lattice spanned by (alpha_k, 1) and (4^k, 0), so the minimum
//! is found by Gauss reduction of that basis under the max norm.
//!
//! The max norm (rather than f^2 + g^2) is the fixed choice here, with ties
//! broken by smallest |g|, then smallest |f|, then positive g, then
//! positive f.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::adic::{four_adic_complexity, generating_value, sequence_modulus, RaaThreshold};
use crate::error::{Error, Result};
use crate::seqgen::QuaternarySequence;

/// A reduced fraction f/g with g odd and positive, the state space of the
/// approximation engine.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FourAdicRational {
    numer: BigInt,
    denom: BigUint,
}

impl FourAdicRational {
    /// Normalizes to a reduced fraction with positive odd denominator.
    pub fn new(numer: BigInt, denom: BigInt) -> Result<Self> {
        if denom.is_even() || denom.is_zero() {
            return Err(Error::EvenDenominator);
        }
        let (numer, denom) = if denom.is_negative() {
            (-numer, -denom)
        } else {
            (numer, denom)
        };
        let gcd = numer.gcd(&denom);
        let (numer, denom) = if gcd > BigInt::one() {
            (numer / &gcd, denom / gcd)
        } else {
            (numer, denom)
        };
        Ok(FourAdicRational {
            numer,
            denom: denom.to_biguint().expect("denominator is positive"),
        })
    }

    /// The canonical zero, 0/1.
    pub fn zero() -> Self {
        FourAdicRational {
            numer: BigInt::zero(),
            denom: BigUint::one(),
        }
    }

    pub fn numer(&self) -> &BigInt {
        &self.numer
    }

    pub fn denom(&self) -> &BigUint {
        &self.denom
    }

    pub fn is_zero(&self) -> bool {
        self.numer.is_zero()
    }
}

/// The first k digits of a 4-adic expansion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigitPrefix {
    digits: Vec<u8>,
}

impl DigitPrefix {
    pub fn new(digits: Vec<u8>) -> Self {
        assert!(digits.iter().all(|&d| d < 4), "digits must lie in 0..4");
        DigitPrefix { digits }
    }

    /// First k digits of the periodic stream of a sequence.
    pub fn from_periodic(symbols: &[u8], k: usize) -> Self {
        let digits = (0..k).map(|j| symbols[j % symbols.len()]).collect();
        DigitPrefix { digits }
    }

    pub fn digits(&self) -> &[u8] {
        &self.digits
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    /// alpha_k = sum d_j 4^j.
    pub fn value(&self) -> BigUint {
        if self.digits.is_empty() {
            return BigUint::zero();
        }
        BigUint::from_radix_le(&self.digits, 4).expect("digits checked at construction")
    }
}

/// The first k 4-adic digits of f/g, by repeated digit extraction:
/// d = f * g^-1 mod 4, then f <- (f - d g) / 4.
pub fn expand_rational(r: &FourAdicRational, k: usize) -> DigitPrefix {
    let g = BigInt::from(r.denom().clone());
    // g mod 4 is 1 or 3, each its own inverse mod 4.
    let g_inv = (&g % 4u32).to_u64_digits().1.first().copied().unwrap_or(1);
    let four = BigInt::from(4u32);
    let mut f = r.numer().clone();
    let mut digits = Vec::with_capacity(k);
    for _ in 0..k {
        let residue = f.mod_floor(&four);
        let r_u64 = residue.to_u64_digits().1.first().copied().unwrap_or(0);
        let d = (r_u64 * g_inv % 4) as u8;
        digits.push(d);
        f = (f - d * &g) / &four;
    }
    DigitPrefix { digits }
}

/// The minimal rational generating a full period: -U(4)/(4^N - 1) reduced.
/// The all-zero sequence maps to the canonical 0/1.
pub fn sequence_to_rational(symbols: &[u8]) -> FourAdicRational {
    let u4 = generating_value(symbols);
    if u4.is_zero() {
        return FourAdicRational::zero();
    }
    let modulus = sequence_modulus(symbols.len() as u64);
    let gcd = u4.gcd(&modulus);
    FourAdicRational {
        numer: -BigInt::from(u4 / &gcd),
        denom: modulus / gcd,
    }
}

type Vec2 = (BigInt, BigInt);

fn max_norm(v: &Vec2) -> BigUint {
    v.0.magnitude().max(v.1.magnitude()).clone()
}

/// The integer q minimizing max(|a - q b|) componentwise; returns 0 when no
/// shift strictly improves, which also guarantees termination of the
/// reduction loop. The norm is convex piecewise-linear in q, so the real
/// minimizer sits at a kink; floor and ceiling of every kink are tried.
fn best_shift(a: &Vec2, b: &Vec2) -> BigInt {
    let mut candidates: Vec<BigInt> = Vec::with_capacity(9);
    let kinks = [
        (&a.0 - &a.1, &b.0 - &b.1),
        (&a.0 + &a.1, &b.0 + &b.1),
        (a.0.clone(), b.0.clone()),
        (a.1.clone(), b.1.clone()),
    ];
    for (num, den) in kinks {
        if !den.is_zero() {
            let q = num.div_floor(&den);
            candidates.push(&q + 1);
            candidates.push(q);
        }
    }
    candidates.sort();
    candidates.dedup();
    let mut best_q = BigInt::zero();
    let mut best_norm = max_norm(a);
    for q in candidates {
        if q.is_zero() {
            continue;
        }
        let shifted = (&a.0 - &q * &b.0, &a.1 - &q * &b.1);
        let norm = max_norm(&shifted);
        if norm < best_norm {
            best_norm = norm;
            best_q = q;
        }
    }
    best_q
}

/// Gauss reduction under the max norm; the result attains both successive
/// minima of the lattice.
fn gauss_reduce(mut b1: Vec2, mut b2: Vec2) -> (Vec2, Vec2) {
    loop {
        if max_norm(&b1) > max_norm(&b2) {
            std::mem::swap(&mut b1, &mut b2);
        }
        let q = best_shift(&b2, &b1);
        if q.is_zero() {
            return (b1, b2);
        }
        b2 = (b2.0 - &q * &b1.0, b2.1 - &q * &b1.1);
    }
}

fn coefficient_bound(basis_norm: &BigUint, lambda: &BigUint, det: &BigUint) -> i64 {
    let bound = (2u32 * basis_norm * lambda) / det + 1u32;
    bound.try_into().unwrap_or(i64::MAX).min(16)
}

/// Finds a nonzero (f, g), g odd, with f = g * alpha (mod 4^k) minimizing
/// max(|f|, |g|), returned as a reduced fraction with positive denominator.
/// An all-zero prefix yields the canonical 0/1.
pub fn approximate(prefix: &DigitPrefix) -> FourAdicRational {
    assert!(!prefix.is_empty(), "prefix must contain at least one digit");
    let alpha = prefix.value();
    if alpha.is_zero() {
        return FourAdicRational::zero();
    }
    let k = prefix.len() as u64;
    let det = crate::adic::power_of_4(k);
    let b1 = (BigInt::from(alpha), BigInt::one());
    let b2 = (BigInt::from(det.clone()), BigInt::zero());
    let (b1, b2) = gauss_reduce(b1, b2);

    // Any reduced basis has a vector with odd second coordinate; the shortest
    // such vector is b1 itself when b1 qualifies, b2 otherwise. The sweep
    // below only collects equal-norm tie participants around it.
    let lambda = if b1.1.is_odd() {
        max_norm(&b1)
    } else {
        max_norm(&b2)
    };
    let u_bound = coefficient_bound(&max_norm(&b2), &lambda, &det);
    let v_bound = coefficient_bound(&max_norm(&b1), &lambda, &det);

    let mut best: Option<(BigUint, BigUint, BigUint, Vec2)> = None;
    for u in -u_bound..=u_bound {
        for v in -v_bound..=v_bound {
            if u == 0 && v == 0 {
                continue;
            }
            let mut w = (
                u * &b1.0 + v * &b2.0,
                u * &b1.1 + v * &b2.1,
            );
            if w.1.is_even() {
                continue;
            }
            if w.1.is_negative() {
                w = (-w.0, -w.1);
            }
            let norm = max_norm(&w);
            if norm > lambda {
                continue;
            }
            let key = (norm, w.1.magnitude().clone(), w.0.magnitude().clone(), w);
            best = Some(match best.take() {
                None => key,
                Some(current) => {
                    let better = (&key.0, &key.1, &key.2, key.3 .0.is_negative())
                        < (&current.0, &current.1, &current.2, current.3 .0.is_negative());
                    if better {
                        key
                    } else {
                        current
                    }
                }
            });
        }
    }
    let (_, _, _, w) = best.expect("b1 or b2 has odd second coordinate");
    FourAdicRational::new(w.0, w.1).expect("odd denominator by construction")
}

/// Measured outcome of running the approximation attack against one
/// sequence with growing prefixes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttackRecord {
    pub period: usize,
    /// Smallest tested prefix length recovering the true fraction.
    pub recovered_at_prefix: Option<usize>,
    pub max_prefix_tested: usize,
    pub complexity: u64,
    pub threshold: RaaThreshold,
}

/// Prefix lengths probed by the attack: 2, 4, ... up to 4N + 16.
fn probe_lengths(period: usize) -> impl Iterator<Item = usize> {
    (1..=2 * period + 8).map(|i| 2 * i)
}

/// Runs the attack on a symbol vector: the smallest even prefix length at
/// which `approximate` reproduces the true fraction exactly (fraction
/// equality after reduction, not digit agreement).
pub fn attack_profile(symbols: &[u8]) -> AttackRecord {
    let period = symbols.len();
    let truth = sequence_to_rational(symbols);
    let (_, complexity) = four_adic_complexity(symbols);
    let threshold = RaaThreshold {
        numer: period as i64 - 16,
        denom: 6,
    };
    let recovered_at_prefix = if truth.is_zero() {
        // approximate([0]) already returns 0/1.
        Some(1)
    } else {
        probe_lengths(period)
            .find(|&k| approximate(&DigitPrefix::from_periodic(symbols, k)) == truth)
    };
    AttackRecord {
        period,
        recovered_at_prefix,
        max_prefix_tested: probe_lengths(period).last().unwrap_or(0),
        complexity,
        threshold,
    }
}

/// Like [`attack_profile`] but records the outcome at every probed length.
pub fn recovery_trace(symbols: &[u8], max_prefix: usize) -> Vec<(usize, bool)> {
    let truth = sequence_to_rational(symbols);
    (1..=max_prefix / 2)
        .map(|i| {
            let k = 2 * i;
            let hit = approximate(&DigitPrefix::from_periodic(symbols, k)) == truth;
            (k, hit)
        })
        .collect()
}

impl AttackRecord {
    pub fn for_sequence(u: &QuaternarySequence) -> Self {
        attack_profile(u.symbols())
    }
}
