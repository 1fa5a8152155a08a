//! The sixteen quaternary sequences built from four binary class indicators.
//!
//! s1..s4 are the indicator sequences of the supports D0uD1, D0uD3, D1uD2 and
//! D2uD3. Pairing two of them (optionally complemented) through the inverse
//! Gray map phi[0,0]=0, phi[0,1]=1, phi[1,1]=2, phi[1,0]=3 yields one symbol
//! per residue. Indexing is 1-based, u1..u16.

use crate::cyclotomy::CyclotomicSystem;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComponentName {
    S1,
    S2,
    S3,
    S4,
}

impl ComponentName {
    /// The two class indices whose union is the support.
    pub fn support_classes(&self) -> (u8, u8) {
        match self {
            ComponentName::S1 => (0, 1),
            ComponentName::S2 => (0, 3),
            ComponentName::S3 => (1, 2),
            ComponentName::S4 => (2, 3),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            ComponentName::S1 => "s1",
            ComponentName::S2 => "s2",
            ComponentName::S3 => "s3",
            ComponentName::S4 => "s4",
        }
    }
}

/// One binary indicator sequence of period p.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryComponent {
    name: ComponentName,
    bits: Vec<u8>,
}

impl BinaryComponent {
    pub fn name(&self) -> ComponentName {
        self.name
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }
}

/// bits(t) = 1 iff t lies in the named support set; bit 0 is always 0.
pub fn binary_component(sys: &CyclotomicSystem, name: ComponentName) -> BinaryComponent {
    let (c0, c1) = name.support_classes();
    let bits = (0..sys.p())
        .map(|t| match sys.class_of(t) {
            Some(c) if c == c0 || c == c1 => 1,
            _ => 0,
        })
        .collect();
    BinaryComponent { name, bits }
}

/// The inverse Gray map on bit pairs.
pub fn inverse_gray(a: u8, b: u8) -> u8 {
    debug_assert!(a <= 1 && b <= 1);
    match (a, b) {
        (0, 0) => 0,
        (0, 1) => 1,
        (1, 1) => 2,
        _ => 3,
    }
}

/// Inverts the Gray map: symbol -> bit pair.
pub fn gray_bits(symbol: u8) -> (u8, u8) {
    match symbol {
        0 => (0, 0),
        1 => (0, 1),
        2 => (1, 1),
        _ => (1, 0),
    }
}

/// Which components feed a sequence, and whether each is complemented.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ComponentSpec {
    pub first: ComponentName,
    pub first_complemented: bool,
    pub second: ComponentName,
    pub second_complemented: bool,
}

impl ComponentSpec {
    /// Printable provenance, e.g. "phi[s1, s2+1]".
    pub fn describe(&self) -> String {
        let part = |name: ComponentName, complemented: bool| {
            if complemented {
                format!("{}+1", name.label())
            } else {
                name.label().to_string()
            }
        };
        format!(
            "phi[{}, {}]",
            part(self.first, self.first_complemented),
            part(self.second, self.second_complemented)
        )
    }
}

/// The component pair of u_k for k in 1..=16.
pub fn component_spec(k: usize) -> Result<ComponentSpec> {
    if !(1..=16).contains(&k) {
        return Err(Error::IndexOutOfRange { index: k, limit: 16 });
    }
    let pairs = [
        (ComponentName::S1, ComponentName::S2),
        (ComponentName::S1, ComponentName::S3),
        (ComponentName::S2, ComponentName::S4),
        (ComponentName::S3, ComponentName::S4),
    ];
    let (first, second) = pairs[(k - 1) % 4];
    // k 1..4: no complements; 5..8: second; 9..12: first; 13..16: both.
    let block = (k - 1) / 4;
    Ok(ComponentSpec {
        first,
        first_complemented: block == 2 || block == 3,
        second,
        second_complemented: block == 1 || block == 3,
    })
}

/// One of the sixteen sequences, with its symbols materialized.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuaternarySequence {
    index: usize,
    symbols: Vec<u8>,
    spec: ComponentSpec,
}

impl QuaternarySequence {
    pub fn index(&self) -> usize {
        self.index
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    pub fn period(&self) -> usize {
        self.symbols.len()
    }

    pub fn spec(&self) -> &ComponentSpec {
        &self.spec
    }
}

/// Builds u_k by applying the inverse Gray map pointwise to its component
/// pair; "+1" complements a component everywhere, including at t = 0.
pub fn quaternary_sequence(sys: &CyclotomicSystem, k: usize) -> Result<QuaternarySequence> {
    let spec = component_spec(k)?;
    let first = binary_component(sys, spec.first);
    let second = binary_component(sys, spec.second);
    let symbols = first
        .bits()
        .iter()
        .zip(second.bits())
        .map(|(&a, &b)| {
            inverse_gray(
                a ^ spec.first_complemented as u8,
                b ^ spec.second_complemented as u8,
            )
        })
        .collect();
    Ok(QuaternarySequence {
        index: k,
        symbols,
        spec,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomy::{build_system, validate_prime};

    fn system_p5() -> CyclotomicSystem {
        build_system(validate_prime(5).unwrap(), 2).unwrap()
    }

    #[test]
    fn inverse_gray_table() {
        assert_eq!(inverse_gray(0, 0), 0);
        assert_eq!(inverse_gray(0, 1), 1);
        assert_eq!(inverse_gray(1, 1), 2);
        assert_eq!(inverse_gray(1, 0), 3);
    }

    #[test]
    fn gray_is_a_bijection() {
        for a in 0..2u8 {
            for b in 0..2u8 {
                assert_eq!(gray_bits(inverse_gray(a, b)), (a, b));
            }
        }
    }

    #[test]
    fn components_p5() {
        let sys = system_p5();
        assert_eq!(
            binary_component(&sys, ComponentName::S1).bits(),
            &[0, 1, 1, 0, 0]
        );
        assert_eq!(
            binary_component(&sys, ComponentName::S2).bits(),
            &[0, 1, 0, 1, 0]
        );
        assert_eq!(
            binary_component(&sys, ComponentName::S3).bits(),
            &[0, 0, 1, 0, 1]
        );
        assert_eq!(
            binary_component(&sys, ComponentName::S4).bits(),
            &[0, 0, 0, 1, 1]
        );
    }

    #[test]
    fn component_bit_zero_is_zero() {
        for p in [5u64, 13, 29] {
            let prime = validate_prime(p).unwrap();
            let sys = build_system(prime, crate::cyclotomy::primitive_root(&prime)).unwrap();
            for name in [
                ComponentName::S1,
                ComponentName::S2,
                ComponentName::S3,
                ComponentName::S4,
            ] {
                let c = binary_component(&sys, name);
                assert_eq!(c.bits()[0], 0);
                let weight: u64 = c.bits().iter().map(|&b| b as u64).sum();
                assert_eq!(weight, (p - 1) / 2);
            }
        }
    }

    #[test]
    fn known_sequences_p5() {
        let sys = system_p5();
        assert_eq!(
            quaternary_sequence(&sys, 3).unwrap().symbols(),
            &[0, 3, 0, 2, 1]
        );
        assert_eq!(
            quaternary_sequence(&sys, 5).unwrap().symbols(),
            &[1, 3, 2, 0, 1]
        );
        assert_eq!(
            quaternary_sequence(&sys, 16).unwrap().symbols(),
            &[2, 2, 1, 3, 0]
        );
    }

    #[test]
    fn sequence_index_out_of_range() {
        let sys = system_p5();
        assert!(quaternary_sequence(&sys, 0).is_err());
        assert!(quaternary_sequence(&sys, 17).is_err());
    }

    #[test]
    fn spec_description() {
        assert_eq!(component_spec(5).unwrap().describe(), "phi[s1, s2+1]");
        assert_eq!(component_spec(10).unwrap().describe(), "phi[s1+1, s3]");
        assert_eq!(component_spec(16).unwrap().describe(), "phi[s3+1, s4+1]");
    }

    #[test]
    fn gray_round_trip_recovers_component_bits() {
        let sys = system_p5();
        for k in 1..=16 {
            let u = quaternary_sequence(&sys, k).unwrap();
            let spec = *u.spec();
            let first = binary_component(&sys, spec.first);
            let second = binary_component(&sys, spec.second);
            for (t, &sym) in u.symbols().iter().enumerate() {
                let (a, b) = gray_bits(sym);
                assert_eq!(a, first.bits()[t] ^ spec.first_complemented as u8);
                assert_eq!(b, second.bits()[t] ^ spec.second_complemented as u8);
            }
        }
    }

    #[test]
    fn symbol_histograms() {
        // Exactly one symbol (the one at t = 0) occurs f + 1 times; the rest
        // occur f times each.
        for p in [5u64, 13, 29, 37, 53, 61] {
            let prime = validate_prime(p).unwrap();
            let sys = build_system(prime, crate::cyclotomy::primitive_root(&prime)).unwrap();
            for k in 1..=16 {
                let u = quaternary_sequence(&sys, k).unwrap();
                let mut counts = [0u64; 4];
                for &s in u.symbols() {
                    counts[s as usize] += 1;
                }
                let at_zero = u.symbols()[0] as usize;
                for (sym, &count) in counts.iter().enumerate() {
                    let expected = if sym == at_zero { prime.f() + 1 } else { prime.f() };
                    assert_eq!(count, expected, "p={p} k={k} symbol={sym}");
                }
            }
        }
    }

    #[test]
    fn double_complement_swaps_symbols() {
        // Complementing both inputs of the Gray map permutes symbols by
        // 0<->2, 1<->3. The affected pairs are (1,13), (2,14), (3,15),
        // (4,16), (5,9), (6,10), (7,11), (8,12).
        let swap = |s: u8| (s + 2) % 4;
        for p in [5u64, 13, 29] {
            let prime = validate_prime(p).unwrap();
            let sys = build_system(prime, crate::cyclotomy::primitive_root(&prime)).unwrap();
            for (a, b) in [(1, 13), (2, 14), (3, 15), (4, 16), (5, 9), (6, 10), (7, 11), (8, 12)]
            {
                let ua = quaternary_sequence(&sys, a).unwrap();
                let ub = quaternary_sequence(&sys, b).unwrap();
                let mapped: Vec<u8> = ua.symbols().iter().map(|&s| swap(s)).collect();
                assert_eq!(mapped, ub.symbols(), "p={p} pair ({a},{b})");
            }
        }
    }
}
