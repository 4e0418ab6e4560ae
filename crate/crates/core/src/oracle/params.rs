use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest input width `l + t` the exhaustive table backend accepts.
pub const TABLE_INPUT_LIMIT: u32 = 24;

/// Widths of a prefix hash `h: {0,1}^(l+t) -> {0,1}^k`.
///
/// An input is the concatenation `m || r` of an `l`-bit message part and a
/// `t`-bit prefix part. As a flat integer the message occupies the high bits:
/// `x = (m << t) | r`. With `t = 0` the classic, prefix-free models apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Params {
    pub ell: u32,
    pub t: u32,
    pub k: u32,
}

/// One hash input split into message and prefix parts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Input {
    pub m: u32,
    pub r: u32,
}

impl Input {
    pub fn new(m: u32, r: u32) -> Self {
        Self { m, r }
    }
}

impl Params {
    pub fn new(ell: u32, t: u32, k: u32) -> Result<Self> {
        if ell == 0 {
            return Err(Error::InvalidParams("l must be at least 1".into()));
        }
        if k == 0 || k > 31 {
            return Err(Error::InvalidParams(format!("k = {k} outside 1..=31")));
        }
        if ell + t > 32 {
            return Err(Error::InvalidParams(format!("l + t = {} exceeds 32", ell + t)));
        }
        Ok(Self { ell, t, k })
    }

    pub fn input_bits(&self) -> u32 {
        self.ell + self.t
    }

    /// `#M`
    pub fn messages(&self) -> u64 {
        1u64 << self.ell
    }

    /// `#R`
    pub fn prefixes(&self) -> u64 {
        1u64 << self.t
    }

    /// `#Y`
    pub fn outputs(&self) -> u64 {
        1u64 << self.k
    }

    /// `#X = #M * #R`
    pub fn inputs(&self) -> u64 {
        1u64 << self.input_bits()
    }

    pub fn split(&self, x: u32) -> Input {
        let r = if self.t == 0 { 0 } else { x & ((1u32 << self.t) - 1) };
        let m = if self.t >= 32 { 0 } else { ((x as u64) >> self.t) as u32 };
        Input { m, r }
    }

    pub fn join(&self, input: Input) -> u32 {
        (((input.m as u64) << self.t) | input.r as u64) as u32
    }

    pub fn check_flat(&self, x: u32) -> Result<()> {
        check_width("input", x as u64, self.input_bits())
    }

    pub fn check_input(&self, input: Input) -> Result<()> {
        check_width("message part", input.m as u64, self.ell)?;
        check_width("prefix", input.r as u64, self.t)
    }

    pub fn check_prefix(&self, r: u32) -> Result<()> {
        check_width("prefix", r as u64, self.t)
    }

    pub fn check_output(&self, y: u32) -> Result<()> {
        check_width("hash value", y as u64, self.k)
    }
}

pub(crate) fn check_width(what: &'static str, value: u64, bits: u32) -> Result<()> {
    if bits < 64 && value >> bits != 0 {
        Err(Error::Length { what, value, bits })
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rejects_degenerate_widths() {
        assert!(Params::new(0, 1, 1).is_err());
        assert!(Params::new(1, 0, 0).is_err());
        assert!(Params::new(20, 13, 8).is_err());
        assert!(Params::new(1, 0, 1).is_ok());
    }

    #[test]
    fn message_is_high_part() {
        let p = Params::new(3, 2, 4).unwrap();
        assert_eq!(p.join(Input::new(0b101, 0b10)), 0b10110);
        assert_eq!(p.split(0b10110), Input::new(0b101, 0b10));
        let p0 = Params::new(5, 0, 4).unwrap();
        assert_eq!(p0.split(0b10110), Input::new(0b10110, 0));
    }

    #[test]
    fn width_checks() {
        let p = Params::new(2, 1, 2).unwrap();
        assert!(p.check_flat(7).is_ok());
        assert!(matches!(p.check_flat(8), Err(Error::Length { .. })));
        assert!(p.check_output(4).is_err());
        assert!(p.check_prefix(1).is_ok());
        assert!(p.check_prefix(2).is_err());
    }

    proptest! {
        #[test]
        fn split_join_roundtrip(ell in 1u32..16, t in 0u32..16, x in any::<u32>()) {
            let p = Params::new(ell, t, 8).unwrap();
            let x = x & ((1u64 << p.input_bits()) - 1) as u32;
            prop_assert_eq!(p.join(p.split(x)), x);
        }
    }
}
