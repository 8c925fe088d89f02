//! Bit-level reference interpreter for fixed-width bit-vectors.
//!
//! Values are explicit bit arrays and every operation is computed by the
//! corresponding circuit (ripple-carry adder, shift-and-add multiplier,
//! bit moves), deliberately sharing nothing with the modular-arithmetic
//! translation it serves as an oracle for.

use num_bigint::{BigInt, BigUint};

/// Little-endian bit array: `bits[0]` is the least significant bit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BvBits {
    bits: Vec<bool>,
}

impl BvBits {
    pub fn zero(width: u32) -> Self {
        BvBits {
            bits: vec![false; width as usize],
        }
    }

    pub fn width(&self) -> u32 {
        self.bits.len() as u32
    }

    pub fn from_biguint(v: &BigUint, width: u32) -> Self {
        let mut bits = Vec::with_capacity(width as usize);
        for i in 0..width as usize {
            bits.push(v.bit(i as u64));
        }
        BvBits { bits }
    }

    pub fn from_u64(v: u64, width: u32) -> Self {
        Self::from_biguint(&BigUint::from(v), width)
    }

    pub fn to_biguint(&self) -> BigUint {
        let mut v = BigUint::default();
        for (i, &b) in self.bits.iter().enumerate() {
            if b {
                v.set_bit(i as u64, true);
            }
        }
        v
    }

    /// Two's-complement signed reading.
    pub fn to_signed(&self) -> BigInt {
        let unsigned = BigInt::from(self.to_biguint());
        if *self.bits.last().unwrap_or(&false) {
            unsigned - (BigInt::from(1) << self.width())
        } else {
            unsigned
        }
    }

    fn sign_bit(&self) -> bool {
        *self.bits.last().unwrap_or(&false)
    }

    pub fn not(&self) -> Self {
        BvBits {
            bits: self.bits.iter().map(|b| !b).collect(),
        }
    }

    pub fn and(&self, other: &Self) -> Self {
        BvBits {
            bits: self
                .bits
                .iter()
                .zip(&other.bits)
                .map(|(&a, &b)| a && b)
                .collect(),
        }
    }

    pub fn or(&self, other: &Self) -> Self {
        BvBits {
            bits: self
                .bits
                .iter()
                .zip(&other.bits)
                .map(|(&a, &b)| a || b)
                .collect(),
        }
    }

    pub fn xor(&self, other: &Self) -> Self {
        BvBits {
            bits: self
                .bits
                .iter()
                .zip(&other.bits)
                .map(|(&a, &b)| a != b)
                .collect(),
        }
    }

    /// Ripple-carry addition, dropping the final carry.
    pub fn add(&self, other: &Self) -> Self {
        let mut bits = Vec::with_capacity(self.bits.len());
        let mut carry = false;
        for (&a, &b) in self.bits.iter().zip(&other.bits) {
            let sum = a ^ b ^ carry;
            carry = (a && b) || (carry && (a ^ b));
            bits.push(sum);
        }
        BvBits { bits }
    }

    /// Ripple-borrow subtraction.
    pub fn sub(&self, other: &Self) -> Self {
        let mut bits = Vec::with_capacity(self.bits.len());
        let mut borrow = false;
        for (&a, &b) in self.bits.iter().zip(&other.bits) {
            let diff = a ^ b ^ borrow;
            borrow = (!a && b) || (!(a ^ b) && borrow);
            bits.push(diff);
        }
        BvBits { bits }
    }

    /// Two's-complement negation: invert, then increment.
    pub fn neg(&self) -> Self {
        let mut out = self.not();
        let mut carry = true;
        for b in out.bits.iter_mut() {
            let sum = *b ^ carry;
            carry = *b && carry;
            *b = sum;
        }
        out
    }

    /// Shift-and-add multiplication.
    pub fn mul(&self, other: &Self) -> Self {
        let w = self.bits.len();
        let mut acc = BvBits::zero(w as u32);
        for (i, &b) in other.bits.iter().enumerate() {
            if b {
                acc = acc.add(&self.shl_amount(i));
            }
        }
        acc
    }

    fn shl_amount(&self, k: usize) -> Self {
        let w = self.bits.len();
        let mut bits = vec![false; w];
        for i in k..w {
            bits[i] = self.bits[i - k];
        }
        BvBits { bits }
    }

    fn lshr_amount(&self, k: usize) -> Self {
        let w = self.bits.len();
        let mut bits = vec![false; w];
        for i in 0..w.saturating_sub(k) {
            bits[i] = self.bits[i + k];
        }
        BvBits { bits }
    }

    fn ashr_amount(&self, k: usize) -> Self {
        let w = self.bits.len();
        let sign = self.sign_bit();
        let mut bits = vec![sign; w];
        for i in 0..w.saturating_sub(k) {
            bits[i] = self.bits[i + k];
        }
        BvBits { bits }
    }

    fn shift_amount_of(other: &Self) -> usize {
        // amounts at or beyond the width behave identically, so cap
        let w = other.bits.len();
        let mut amount = 0usize;
        for (i, &b) in other.bits.iter().enumerate() {
            if b {
                if i >= usize::BITS as usize - 1 {
                    return w;
                }
                amount |= 1usize << i;
                if amount >= w {
                    return w;
                }
            }
        }
        amount.min(w)
    }

    pub fn shl(&self, other: &Self) -> Self {
        self.shl_amount(Self::shift_amount_of(other))
    }

    pub fn lshr(&self, other: &Self) -> Self {
        self.lshr_amount(Self::shift_amount_of(other))
    }

    pub fn ashr(&self, other: &Self) -> Self {
        self.ashr_amount(Self::shift_amount_of(other))
    }

    /// Lexicographic comparison from the most significant bit.
    pub fn ult(&self, other: &Self) -> bool {
        for (a, b) in self.bits.iter().rev().zip(other.bits.iter().rev()) {
            if a != b {
                return !a;
            }
        }
        false
    }

    pub fn ule(&self, other: &Self) -> bool {
        !other.ult(self)
    }

    pub fn slt(&self, other: &Self) -> bool {
        match (self.sign_bit(), other.sign_bit()) {
            (true, false) => true,
            (false, true) => false,
            _ => self.ult(other),
        }
    }

    pub fn sle(&self, other: &Self) -> bool {
        !other.slt(self)
    }

    pub fn zero_extend(&self, extra: u32) -> Self {
        let mut bits = self.bits.clone();
        bits.extend(std::iter::repeat_n(false, extra as usize));
        BvBits { bits }
    }

    pub fn sign_extend(&self, extra: u32) -> Self {
        let sign = self.sign_bit();
        let mut bits = self.bits.clone();
        bits.extend(std::iter::repeat_n(sign, extra as usize));
        BvBits { bits }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bv(v: u64, w: u32) -> BvBits {
        BvBits::from_u64(v, w)
    }

    #[test]
    fn arithmetic_matches_modular_reference() {
        for w in 1..=5u32 {
            let m = 1u64 << w;
            for a in 0..m {
                for b in 0..m {
                    let (x, y) = (bv(a, w), bv(b, w));
                    assert_eq!(x.add(&y).to_biguint(), ((a + b) % m).into(), "add {a} {b} w{w}");
                    assert_eq!(
                        x.sub(&y).to_biguint(),
                        ((a + m - b) % m).into(),
                        "sub {a} {b} w{w}"
                    );
                    assert_eq!(
                        x.mul(&y).to_biguint(),
                        ((a * b) % m).into(),
                        "mul {a} {b} w{w}"
                    );
                    assert_eq!(x.ult(&y), a < b);
                    let signed = |v: u64| -> i64 {
                        if v >= m / 2 {
                            v as i64 - m as i64
                        } else {
                            v as i64
                        }
                    };
                    assert_eq!(x.slt(&y), signed(a) < signed(b), "slt {a} {b} w{w}");
                }
            }
        }
    }

    #[test]
    fn negation_and_shifts() {
        let x = bv(0b1011, 4);
        assert_eq!(x.neg().to_biguint(), ((16 - 0b1011) % 16u32).into());
        assert_eq!(x.shl(&bv(1, 4)).to_biguint(), 0b0110u32.into());
        assert_eq!(x.lshr(&bv(1, 4)).to_biguint(), 0b0101u32.into());
        assert_eq!(x.ashr(&bv(1, 4)).to_biguint(), 0b1101u32.into());
        assert_eq!(x.shl(&bv(9, 4)).to_biguint(), 0u32.into());
        assert_eq!(x.ashr(&bv(9, 4)).to_biguint(), 0b1111u32.into());
    }

    #[test]
    fn signed_reading() {
        assert_eq!(bv(255, 8).to_signed(), BigInt::from(-1));
        assert_eq!(bv(127, 8).to_signed(), BigInt::from(127));
        assert_eq!(bv(128, 8).to_signed(), BigInt::from(-128));
    }

    #[test]
    fn extensions() {
        assert_eq!(bv(0b10, 2).sign_extend(2).to_biguint(), 0b1110u32.into());
        assert_eq!(bv(0b10, 2).zero_extend(2).to_biguint(), 0b0010u32.into());
    }
}
