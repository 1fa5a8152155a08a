//! Machine checks of the congruence identities behind the complexity bounds,
//! plus Gaussian-integer autocorrelation.
//!
//! The checked identities, all modulo 4^p - 1 or (4^p - 1)/3:
//!   * eta products: eta_l * eta_{l+k} = sum_f (k,f) eta_{f+l} + delta, where
//!     delta = (p-1)/4 exactly when (p = 1 mod 8, k = 0) or (p = 5 mod 8,
//!     k = 2). Only the second branch is reachable for validated primes.
//!   * H^2 = p mod (4^p - 1)/3.
//!   * eight product congruences: 4 * P * Q = c1 * H + c2 mod (4^p - 1)/3,
//!     where P and Q are affine combinations of the etas and c1 = +/-2(b+/-4y).
//!
//! Both sides are always reduced into canonical residues before comparison.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;

use crate::adic::{eta_vector, EtaVector};
use crate::cyclotomy::{
    cyclotomic_numbers_direct, CyclotomicMatrix, CyclotomicSystem, QuarticDecomposition,
};
use crate::error::{Error, Result};

/// An element of Z[i]; holds exact autocorrelation values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct GaussianInteger {
    pub re: i64,
    pub im: i64,
}

impl GaussianInteger {
    pub fn conj(&self) -> Self {
        GaussianInteger {
            re: self.re,
            im: -self.im,
        }
    }
}

/// A(tau) = sum_t i^(u(t+tau) - u(t)), accumulated exactly.
pub fn autocorrelation(symbols: &[u8], tau: usize) -> GaussianInteger {
    let n = symbols.len();
    let mut re = 0i64;
    let mut im = 0i64;
    for t in 0..n {
        let diff = (4 + symbols[(t + tau) % n] - symbols[t]) % 4;
        match diff {
            0 => re += 1,
            1 => im += 1,
            2 => re -= 1,
            _ => im -= 1,
        }
    }
    GaussianInteger { re, im }
}

/// A(tau) for every shift 0..p-1.
pub fn autocorrelation_table(symbols: &[u8]) -> Vec<GaussianInteger> {
    (0..symbols.len())
        .map(|tau| autocorrelation(symbols, tau))
        .collect()
}

/// Both sides of a failed (or checked) congruence, as canonical residues.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckResidues {
    pub lhs: BigUint,
    pub rhs: BigUint,
}

/// The additive correction of the eta-product identity.
pub fn delta_term(p: u64, k: usize) -> u64 {
    match (p % 8, k) {
        (1, 0) | (5, 2) => (p - 1) / 4,
        _ => 0,
    }
}

/// Checks eta_l * eta_{l+k} = sum_f (k,f) eta_{f+l} + delta mod 4^p - 1.
pub fn check_eta_product(
    etas: &EtaVector,
    matrix: &CyclotomicMatrix,
    p: u64,
    k: usize,
    l: usize,
) -> (bool, CheckResidues) {
    let modulus = etas.modulus();
    let lhs = etas.eta(l) * etas.eta((l + k) % 4) % modulus;
    let mut rhs = BigUint::from(delta_term(p, k));
    for f in 0..4 {
        rhs += matrix.get(k, f) * etas.eta((f + l) % 4);
    }
    rhs %= modulus;
    (lhs == rhs, CheckResidues { lhs, rhs })
}

/// Checks H^2 = p mod (4^p - 1)/3.
pub fn check_h_square(etas: &EtaVector, p: u64) -> bool {
    etas.h() * etas.h() % etas.third() == BigUint::from(p)
}

/// Constants of one product congruence. The left side is
/// 4 (p_const + sum p_coef[i] eta_i)(q_const + sum q_coef[i] eta_i) and the
/// right side is sign * 2 * (h_base + y_sign * 4y) * H + 5p + add_const.
struct CongruenceCase {
    p_const: u32,
    p_coef: [u32; 4],
    q_const: u32,
    q_coef: [u32; 4],
    sign: i64,
    h_base: i64,
    y_sign: i64,
    add_const: u32,
}

const CASES: [CongruenceCase; 8] = [
    CongruenceCase { p_const: 3, p_coef: [0, 1, 2, 3], q_const: 3, q_coef: [2, 3, 0, 1], sign: -1, h_base: 3, y_sign: 1, add_const: 9 },
    CongruenceCase { p_const: 1, p_coef: [3, 2, 1, 0], q_const: 1, q_coef: [1, 0, 3, 2], sign: -1, h_base: 1, y_sign: 1, add_const: 1 },
    CongruenceCase { p_const: 0, p_coef: [2, 3, 0, 1], q_const: 0, q_coef: [0, 1, 2, 3], sign: 1, h_base: 3, y_sign: -1, add_const: 9 },
    CongruenceCase { p_const: 0, p_coef: [3, 0, 1, 2], q_const: 0, q_coef: [1, 2, 3, 0], sign: -1, h_base: 3, y_sign: -1, add_const: 9 },
    CongruenceCase { p_const: 0, p_coef: [0, 3, 2, 1], q_const: 0, q_coef: [2, 1, 0, 3], sign: 1, h_base: 3, y_sign: 1, add_const: 9 },
    CongruenceCase { p_const: 1, p_coef: [2, 3, 0, 1], q_const: 1, q_coef: [0, 1, 2, 3], sign: 1, h_base: 1, y_sign: -1, add_const: 1 },
    CongruenceCase { p_const: 1, p_coef: [2, 1, 0, 3], q_const: 1, q_coef: [0, 3, 2, 1], sign: 1, h_base: 1, y_sign: 1, add_const: 1 },
    CongruenceCase { p_const: 2, p_coef: [2, 1, 0, 3], q_const: 2, q_coef: [0, 3, 2, 1], sign: -1, h_base: 1, y_sign: -1, add_const: 1 },
];

/// The left factor of a case, as an affine eta combination mod (4^p - 1)/3.
fn affine_eta(etas: &EtaVector, constant: u32, coef: &[u32; 4]) -> BigUint {
    let mut acc = BigUint::from(constant);
    for i in 0..4 {
        acc += coef[i] * etas.eta(i);
    }
    acc % etas.third()
}

/// Checks product congruence `case` (1-based, 1..=8) for the system behind
/// `etas` with the resolved y.
pub fn check_product_congruence(
    etas: &EtaVector,
    y: i64,
    p: u64,
    case: usize,
) -> Result<(bool, CheckResidues)> {
    if !(1..=8).contains(&case) {
        return Err(Error::IndexOutOfRange { index: case, limit: 8 });
    }
    let spec = &CASES[case - 1];
    let third = etas.third();
    let left = affine_eta(etas, spec.p_const, &spec.p_coef);
    let right = affine_eta(etas, spec.q_const, &spec.q_coef);
    let lhs = 4u32 * left * right % third;

    let h_multiplier = spec.sign * 2 * (spec.h_base + spec.y_sign * 4 * y);
    let rhs_int = BigInt::from(h_multiplier) * BigInt::from(etas.h().clone())
        + BigInt::from(5 * p + spec.add_const as u64);
    let rhs = rhs_int
        .mod_floor(&BigInt::from(third.clone()))
        .to_biguint()
        .expect("mod_floor of positive modulus is non-negative");
    Ok((lhs == rhs, CheckResidues { lhs, rhs }))
}

/// Residues retained for a failed check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FailureWitness {
    pub identity: String,
    pub lhs: BigUint,
    pub rhs: BigUint,
}

/// Outcome of the full identity suite at one prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub p: u64,
    pub theta: u64,
    /// eta_products[k][l]
    pub eta_products: [[bool; 4]; 4],
    pub h_square: bool,
    pub product_congruences: [bool; 8],
    /// delta value used for each k.
    pub delta_used: [u64; 4],
    pub failures: Vec<FailureWitness>,
}

impl VerificationReport {
    pub fn all_ok(&self) -> bool {
        self.h_square
            && self.eta_products.iter().flatten().all(|&b| b)
            && self.product_congruences.iter().all(|&b| b)
    }
}

/// Runs every eta-product pair, the H^2 check, and all eight product
/// congruences; failures carry their witnessing residues.
pub fn verify_all(sys: &CyclotomicSystem, dec: &QuarticDecomposition) -> VerificationReport {
    let p = sys.p();
    let etas = eta_vector(sys);
    let matrix = cyclotomic_numbers_direct(sys);
    let mut failures = Vec::new();

    let mut eta_products = [[false; 4]; 4];
    for k in 0..4 {
        for l in 0..4 {
            let (ok, residues) = check_eta_product(&etas, &matrix, p, k, l);
            eta_products[k][l] = ok;
            if !ok {
                failures.push(FailureWitness {
                    identity: format!("eta_product k={k} l={l}"),
                    lhs: residues.lhs,
                    rhs: residues.rhs,
                });
            }
        }
    }

    let h_square = check_h_square(&etas, p);
    if !h_square {
        failures.push(FailureWitness {
            identity: "h_square".into(),
            lhs: etas.h() * etas.h() % etas.third(),
            rhs: BigUint::from(p),
        });
    }

    let mut product_congruences = [false; 8];
    for case in 1..=8 {
        let (ok, residues) =
            check_product_congruence(&etas, dec.y(), p, case).expect("case in range");
        product_congruences[case - 1] = ok;
        if !ok {
            failures.push(FailureWitness {
                identity: format!("product_congruence case={case}"),
                lhs: residues.lhs,
                rhs: residues.rhs,
            });
        }
    }

    VerificationReport {
        p,
        theta: sys.theta(),
        eta_products,
        h_square,
        product_congruences,
        delta_used: std::array::from_fn(|k| delta_term(p, k)),
        failures,
    }
}
