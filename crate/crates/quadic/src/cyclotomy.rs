//! Quartic cyclotomic classes over F_p for primes p = 5 (mod 8).
//!
//! A validated prime p = 4f + 1 (f odd) together with a primitive root theta
//! splits the nonzero residues into four classes D_0..D_3, where D_i collects
//! the powers theta^(i+4j). The class transition counts |(D_i + 1) n D_j| are
//! computed two ways: by direct enumeration and by the classical closed form
//! in terms of the decomposition p = x^2 + 4y^2, x = 1 (mod 4). The sign of y
//! depends on the choice of theta and is pinned by matching the two matrices.

use crate::error::{Error, Result};

/// A prime p = 5 (mod 8), stored with f = (p - 1) / 4 (always odd).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ValidatedPrime {
    p: u64,
    f: u64,
}

impl ValidatedPrime {
    pub fn p(&self) -> u64 {
        self.p
    }

    /// f = (p - 1) / 4, the size of each cyclotomic class.
    pub fn f(&self) -> u64 {
        self.f
    }
}

/// Deterministic trial-division primality check, adequate for desk scale.
pub(crate) fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

pub(crate) fn pow_mod_u64(base: u64, mut exp: u64, modulus: u64) -> u64 {
    let m = modulus as u128;
    let mut acc = 1u128;
    let mut b = (base as u128) % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Checks that p is prime and p = 5 (mod 8).
pub fn validate_prime(p: u64) -> Result<ValidatedPrime> {
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(p));
    }
    if p % 8 != 5 {
        return Err(Error::WrongResidueClass(p));
    }
    Ok(ValidatedPrime { p, f: (p - 1) / 4 })
}

/// True iff g generates the full multiplicative group mod p.
pub fn is_primitive_root(prime: &ValidatedPrime, g: u64) -> bool {
    let p = prime.p();
    if g < 2 || g >= p {
        return false;
    }
    prime_factors(p - 1)
        .iter()
        .all(|q| pow_mod_u64(g, (p - 1) / q, p) != 1)
}

/// The smallest primitive root mod p. Exists for every prime, so this
/// cannot fail for a validated prime.
pub fn primitive_root(prime: &ValidatedPrime) -> u64 {
    (2..prime.p())
        .find(|&g| is_primitive_root(prime, g))
        .expect("every prime has a primitive root")
}

/// The quartic classes of F_p for a fixed primitive root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclotomicSystem {
    prime: ValidatedPrime,
    theta: u64,
    /// class_of[t] = Some(i) iff t lies in D_i; class_of[0] = None.
    class_of: Vec<Option<u8>>,
    classes: [Vec<u64>; 4],
}

impl CyclotomicSystem {
    pub fn prime(&self) -> &ValidatedPrime {
        &self.prime
    }

    pub fn p(&self) -> u64 {
        self.prime.p()
    }

    pub fn theta(&self) -> u64 {
        self.theta
    }

    /// Class index of a residue, None for t = 0 (mod p).
    pub fn class_of(&self, t: u64) -> Option<u8> {
        self.class_of[(t % self.p()) as usize]
    }

    /// The four classes, each sorted ascending.
    pub fn classes(&self) -> &[Vec<u64>; 4] {
        &self.classes
    }
}

/// Populates the classes D_i = { theta^(i+4j) : j = 0..f-1 }.
pub fn build_system(prime: ValidatedPrime, theta: u64) -> Result<CyclotomicSystem> {
    let p = prime.p();
    if !is_primitive_root(&prime, theta) {
        return Err(Error::NotPrimitiveRoot { p, theta });
    }
    let mut class_of = vec![None; p as usize];
    let mut classes: [Vec<u64>; 4] = Default::default();
    let mut power = 1u64;
    for exponent in 0..p - 1 {
        let class = (exponent % 4) as u8;
        class_of[power as usize] = Some(class);
        classes[class as usize].push(power);
        power = power * theta % p;
    }
    for class in classes.iter_mut() {
        class.sort_unstable();
    }
    Ok(CyclotomicSystem {
        prime,
        theta,
        class_of,
        classes,
    })
}

/// 4x4 table of class transition counts; entry (i, j) counts the d in D_i
/// with d + 1 in D_j.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CyclotomicMatrix {
    entries: [[u64; 4]; 4],
}

impl CyclotomicMatrix {
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i][j]
    }

    pub fn rows(&self) -> &[[u64; 4]; 4] {
        &self.entries
    }

    /// Sum of all 16 entries; always p - 2 (every nonzero d except d = -1
    /// contributes one pair (d, d+1) with both entries nonzero).
    pub fn total(&self) -> u64 {
        self.entries.iter().flatten().sum()
    }
}

/// Counts |(D_i + 1) n D_j| by enumeration.
pub fn cyclotomic_numbers_direct(sys: &CyclotomicSystem) -> CyclotomicMatrix {
    let p = sys.p();
    let mut entries = [[0u64; 4]; 4];
    for (i, class) in sys.classes().iter().enumerate() {
        for &d in class {
            if let Some(j) = sys.class_of((d + 1) % p) {
                entries[i][j as usize] += 1;
            }
        }
    }
    CyclotomicMatrix { entries }
}

/// The decomposition p = x^2 + 4y^2 with x = 1 (mod 4). The sign of y is
/// tied to the primitive root of the system it was resolved against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuarticDecomposition {
    x: i64,
    y: i64,
}

impl QuarticDecomposition {
    pub fn x(&self) -> i64 {
        self.x
    }

    pub fn y(&self) -> i64 {
        self.y
    }
}

fn exact_square_root(n: u64) -> Option<u64> {
    let r = (n as f64).sqrt() as u64;
    for c in r.saturating_sub(2)..=r + 2 {
        if c * c == n {
            return Some(c);
        }
    }
    None
}

/// Finds x = 1 (mod 4) with x^2 + 4y^2 = p, then picks the sign of y for
/// which the closed-form matrix reproduces the enumerated one.
pub fn quartic_decomposition(sys: &CyclotomicSystem) -> Result<QuarticDecomposition> {
    let p = sys.p();
    let prime = *sys.prime();
    let mut found: Option<(i64, u64)> = None;
    let mut a = 1u64;
    while a * a <= p {
        let rest = p - a * a;
        if rest % 4 == 0 {
            if let Some(y0) = exact_square_root(rest / 4) {
                let x = if a % 4 == 1 { a as i64 } else { -(a as i64) };
                found = Some((x, y0));
                break;
            }
        }
        a += 2;
    }
    let (x, y0) = found.ok_or(Error::NoDecomposition(p))?;
    // y0 > 0 for p prime, so the two candidates are distinct.
    let direct = cyclotomic_numbers_direct(sys);
    let mut matched = Vec::new();
    for y in [y0 as i64, -(y0 as i64)] {
        let candidate = QuarticDecomposition { x, y };
        if let Ok(formula) = cyclotomic_numbers_formula(&prime, &candidate) {
            if formula == direct {
                matched.push(candidate);
            }
        }
    }
    match matched.as_slice() {
        [unique] => Ok(*unique),
        _ => Err(Error::AmbiguousSign(p)),
    }
}

/// Builds the matrix from the five closed-form entry values.
///
/// The layout repeats five values A..E:
/// rows (A,B,C,D), (E,E,D,B), (A,E,A,E), (E,D,B,E).
pub fn cyclotomic_numbers_formula(
    prime: &ValidatedPrime,
    dec: &QuarticDecomposition,
) -> Result<CyclotomicMatrix> {
    let p = prime.p() as i64;
    let (x, y) = (dec.x(), dec.y());
    let quotient = |entry: char, numerator: i64| -> Result<u64> {
        if numerator % 16 != 0 || numerator < 0 {
            return Err(Error::NonIntegralEntry { entry, numerator });
        }
        Ok((numerator / 16) as u64)
    };
    let a = quotient('A', p - 7 + 2 * x)?;
    let b = quotient('B', p + 1 + 2 * x - 8 * y)?;
    let c = quotient('C', p + 1 - 6 * x)?;
    let d = quotient('D', p + 1 + 2 * x + 8 * y)?;
    let e = quotient('E', p - 3 - 2 * x)?;
    Ok(CyclotomicMatrix {
        entries: [
            [a, b, c, d],
            [e, e, d, b],
            [a, e, a, e],
            [e, d, b, e],
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validate_prime_accepts_5() {
        let v = validate_prime(5).unwrap();
        assert_eq!(v.p(), 5);
        assert_eq!(v.f(), 1);
    }

    #[test]
    fn validate_prime_accepts_13() {
        let v = validate_prime(13).unwrap();
        assert_eq!(v.p(), 13);
        assert_eq!(v.f(), 3);
    }

    #[test]
    fn validate_prime_rejects_wrong_residue() {
        assert_eq!(validate_prime(17), Err(Error::WrongResidueClass(17)));
    }

    #[test]
    fn validate_prime_rejects_composite() {
        assert_eq!(validate_prime(9), Err(Error::NotPrime(9)));
        assert_eq!(validate_prime(0), Err(Error::NotPrime(0)));
        assert_eq!(validate_prime(1), Err(Error::NotPrime(1)));
    }

    #[test]
    fn smallest_primitive_roots() {
        for (p, expected) in [(5, 2), (13, 2), (29, 2)] {
            let prime = validate_prime(p).unwrap();
            assert_eq!(primitive_root(&prime), expected, "p = {p}");
        }
    }

    #[test]
    fn classes_for_p5_theta2() {
        let sys = build_system(validate_prime(5).unwrap(), 2).unwrap();
        assert_eq!(sys.classes()[0], vec![1]);
        assert_eq!(sys.classes()[1], vec![2]);
        assert_eq!(sys.classes()[2], vec![4]);
        assert_eq!(sys.classes()[3], vec![3]);
        assert_eq!(sys.class_of(0), None);
        assert_eq!(sys.class_of(3), Some(3));
    }

    #[test]
    fn classes_for_p5_theta3() {
        let sys = build_system(validate_prime(5).unwrap(), 3).unwrap();
        assert_eq!(sys.classes()[0], vec![1]);
        assert_eq!(sys.classes()[1], vec![3]);
        assert_eq!(sys.classes()[2], vec![4]);
        assert_eq!(sys.classes()[3], vec![2]);
    }

    #[test]
    fn build_system_rejects_non_generator() {
        // 4 = 2^2 has order (p-1)/2 mod 5.
        let err = build_system(validate_prime(5).unwrap(), 4).unwrap_err();
        assert_eq!(err, Error::NotPrimitiveRoot { p: 5, theta: 4 });
    }

    #[test]
    fn direct_matrix_p5() {
        let sys = build_system(validate_prime(5).unwrap(), 2).unwrap();
        let m = cyclotomic_numbers_direct(&sys);
        assert_eq!(
            m.rows(),
            &[[0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 0, 0], [0, 0, 1, 0]]
        );
        assert_eq!(m.total(), 3);
    }

    #[test]
    fn direct_matrix_total_is_p_minus_2() {
        for p in [5u64, 13, 29, 37] {
            let prime = validate_prime(p).unwrap();
            let sys = build_system(prime, primitive_root(&prime)).unwrap();
            assert_eq!(cyclotomic_numbers_direct(&sys).total(), p - 2);
        }
    }

    #[test]
    fn direct_matrix_p13_total() {
        let sys = build_system(validate_prime(13).unwrap(), 2).unwrap();
        assert_eq!(cyclotomic_numbers_direct(&sys).total(), 11);
    }

    #[test]
    fn decomposition_p5_theta2() {
        let sys = build_system(validate_prime(5).unwrap(), 2).unwrap();
        let dec = quartic_decomposition(&sys).unwrap();
        assert_eq!((dec.x(), dec.y()), (1, -1));
    }

    #[test]
    fn decomposition_p13_theta2() {
        let sys = build_system(validate_prime(13).unwrap(), 2).unwrap();
        let dec = quartic_decomposition(&sys).unwrap();
        assert_eq!((dec.x(), dec.y()), (-3, -1));
    }

    #[test]
    fn decomposition_p29() {
        let prime = validate_prime(29).unwrap();
        let sys = build_system(prime, 2).unwrap();
        let dec = quartic_decomposition(&sys).unwrap();
        assert_eq!(dec.x(), 5);
        assert_eq!(dec.y().abs(), 1);
        assert_eq!(dec.x() * dec.x() + 4 * dec.y() * dec.y(), 29);
        assert_eq!(dec.x().rem_euclid(4), 1);
    }

    #[test]
    fn formula_entries_p5() {
        let prime = validate_prime(5).unwrap();
        let dec = QuarticDecomposition { x: 1, y: -1 };
        let m = cyclotomic_numbers_formula(&prime, &dec).unwrap();
        // A = (5-7+2)/16 = 0, B = (5+1+2+8)/16 = 1, C = D = E = 0.
        assert_eq!(
            m.rows(),
            &[[0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 0, 0], [0, 0, 1, 0]]
        );
    }

    #[test]
    fn formula_entry_c_for_p13() {
        let prime = validate_prime(13).unwrap();
        let dec = QuarticDecomposition { x: -3, y: -1 };
        let m = cyclotomic_numbers_formula(&prime, &dec).unwrap();
        // C = (13+1+18)/16 = 2 sits at (0, 2).
        assert_eq!(m.get(0, 2), 2);
    }

    #[test]
    fn formula_rejects_bogus_decomposition() {
        let prime = validate_prime(13).unwrap();
        let dec = QuarticDecomposition { x: 1, y: 1 };
        assert!(matches!(
            cyclotomic_numbers_formula(&prime, &dec),
            Err(Error::NonIntegralEntry { .. })
        ));
    }

    #[test]
    fn classes_partition_nonzero_residues() {
        for p in [5u64, 13, 29, 37, 53, 61] {
            let prime = validate_prime(p).unwrap();
            let sys = build_system(prime, primitive_root(&prime)).unwrap();
            let mut seen = vec![false; p as usize];
            for (i, class) in sys.classes().iter().enumerate() {
                assert_eq!(class.len() as u64, prime.f(), "class size p={p} i={i}");
                for &t in class {
                    assert!(t > 0 && t < p);
                    assert!(!seen[t as usize], "duplicate {t} for p={p}");
                    seen[t as usize] = true;
                    assert_eq!(sys.class_of(t), Some(i as u8));
                }
            }
            assert!(seen[1..].iter().all(|&s| s));
        }
    }
}
