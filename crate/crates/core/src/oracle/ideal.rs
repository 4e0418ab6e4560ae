//! Ground-truth oracles answered from the full function table.
//!
//! Every "uniformly at random" choice is drawn from the caller's stream.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::params::Input;
use super::table::FunctionTable;
use crate::error::{Error, Result};

/// Answer of a weakening oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum OracleAnswer {
    /// Collision-type answers: two distinct inputs with equal hash.
    Pair(Input, Input),
    /// Preimage-type answers.
    Single(Input),
    /// The oracle's `⊥`.
    Bottom,
}

impl OracleAnswer {
    pub fn is_bottom(&self) -> bool {
        matches!(self, OracleAnswer::Bottom)
    }
}

/// Uniform element of `fiber`, skipping `exclude` if it is a member.
fn pick_excluding<R: Rng + ?Sized>(fiber: &[u32], exclude: Option<u32>, rng: &mut R) -> Option<u32> {
    let skip = exclude.and_then(|e| fiber.binary_search(&e).ok());
    let legal = fiber.len() - skip.is_some() as usize;
    if legal == 0 {
        return None;
    }
    let mut i = rng.random_range(0..legal);
    if let Some(s) = skip {
        if i >= s {
            i += 1;
        }
    }
    Some(fiber[i])
}

impl FunctionTable {
    /// Random oracle: `h(x)` for flat input `x`.
    pub fn ro_query(&self, x: u32) -> Result<u32> {
        self.params().check_flat(x)?;
        Ok(self.entries()[x as usize])
    }

    /// Collision oracle of the prefix-free model (`t = 0`).
    pub fn co_query<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<OracleAnswer> {
        self.require_classic()?;
        self.common_cp_co_query(0, rng)
    }

    /// Second-preimage oracle of the prefix-free model.
    pub fn spo_query<R: Rng + ?Sized>(&self, x: u32, rng: &mut R) -> Result<OracleAnswer> {
        self.require_classic()?;
        self.cp_spo_query(x, 0, rng)
    }

    /// First-preimage oracle of the prefix-free model.
    pub fn fpo_query<R: Rng + ?Sized>(&self, y: u32, rng: &mut R) -> Result<OracleAnswer> {
        self.require_classic()?;
        self.cp_fpo_query(y, 0, rng)
    }

    /// Common chosen-prefix collision oracle: a uniform `m`, then a uniform
    /// `m' != m` with `h(m'||r) = h(m||r)`.
    pub fn common_cp_co_query<R: Rng + ?Sized>(&self, r: u32, rng: &mut R) -> Result<OracleAnswer> {
        self.cp_co_query(r, r, rng)
    }

    /// Chosen-prefix collision oracle. For `r == r2` the sampled entry itself
    /// is excluded; for `r != r2` any entry of class `r2` (even `m' = m`) is legal.
    pub fn cp_co_query<R: Rng + ?Sized>(&self, r: u32, r2: u32, rng: &mut R) -> Result<OracleAnswer> {
        let p = self.params();
        p.check_prefix(r)?;
        p.check_prefix(r2)?;
        let m = rng.random_range(0..p.messages()) as u32;
        let y = self.eval(Input::new(m, r));
        let exclude = (r == r2).then_some(m);
        Ok(match pick_excluding(self.fiber(y, r2), exclude, rng) {
            Some(m2) => OracleAnswer::Pair(Input::new(m, r), Input::new(m2, r2)),
            None => OracleAnswer::Bottom,
        })
    }

    /// Chosen-prefix second-preimage oracle: uniform `m'||r2 != x` with the hash of `x`.
    pub fn cp_spo_query<R: Rng + ?Sized>(&self, x: u32, r2: u32, rng: &mut R) -> Result<OracleAnswer> {
        let p = self.params();
        p.check_flat(x)?;
        p.check_prefix(r2)?;
        let input = p.split(x);
        let y = self.eval(input);
        let exclude = (input.r == r2).then_some(input.m);
        Ok(match pick_excluding(self.fiber(y, r2), exclude, rng) {
            Some(m2) => OracleAnswer::Single(Input::new(m2, r2)),
            None => OracleAnswer::Bottom,
        })
    }

    /// Chosen-prefix first-preimage oracle: uniform `m||r` hashing to `y`.
    pub fn cp_fpo_query<R: Rng + ?Sized>(&self, y: u32, r: u32, rng: &mut R) -> Result<OracleAnswer> {
        let p = self.params();
        p.check_output(y)?;
        p.check_prefix(r)?;
        Ok(match pick_excluding(self.fiber(y, r), None, rng) {
            Some(m) => OracleAnswer::Single(Input::new(m, r)),
            None => OracleAnswer::Bottom,
        })
    }

    fn require_classic(&self) -> Result<()> {
        if self.params().t != 0 {
            Err(Error::Precondition("prefix-free oracles need t = 0"))
        } else {
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::Params;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(0xfeed)
    }

    fn constant(ell: u32, t: u32, k: u32) -> FunctionTable {
        FunctionTable::from_fn(Params::new(ell, t, k).unwrap(), |_| 0).unwrap()
    }

    fn identity(bits: u32) -> FunctionTable {
        let p = Params::new(bits, 0, bits).unwrap();
        FunctionTable::from_fn(p, |i| i.m).unwrap()
    }

    #[test]
    fn ro_is_consistent_and_in_range() {
        let p = Params::new(5, 2, 3).unwrap();
        let t = FunctionTable::random(p, &mut rng()).unwrap();
        for x in 0..p.inputs() as u32 {
            let y = t.ro_query(x).unwrap();
            assert_eq!(y, t.ro_query(x).unwrap());
            assert!(y < 8);
        }
        assert!(matches!(t.ro_query(1 << 7), Err(Error::Length { .. })));
    }

    #[test]
    fn ro_matches_regeneration() {
        let p = Params::new(2, 0, 2).unwrap();
        let t = FunctionTable::random(p, &mut ChaCha8Rng::seed_from_u64(77)).unwrap();
        let mut again = ChaCha8Rng::seed_from_u64(77);
        for x in 0..4 {
            assert_eq!(t.ro_query(x).unwrap(), again.random_range(0..4u32));
        }
    }

    #[test]
    fn co_on_constant_always_collides() {
        let t = constant(4, 0, 3);
        let mut rng = rng();
        for _ in 0..200 {
            match t.co_query(&mut rng).unwrap() {
                OracleAnswer::Pair(a, b) => {
                    assert_ne!(a, b);
                    assert_eq!(t.eval(a), t.eval(b));
                }
                other => panic!("{other:?}"),
            }
        }
    }

    #[test]
    fn injective_table_never_collides() {
        let t = identity(5);
        let mut rng = rng();
        for x in 0..32 {
            assert!(t.co_query(&mut rng).unwrap().is_bottom());
            assert!(t.spo_query(x, &mut rng).unwrap().is_bottom());
            assert_eq!(t.fpo_query(x, &mut rng).unwrap(), OracleAnswer::Single(Input::new(x, 0)));
        }
    }

    #[test]
    fn classic_oracles_need_t_zero() {
        let t = constant(2, 1, 2);
        assert!(matches!(t.co_query(&mut rng()), Err(Error::Precondition(_))));
        assert!(matches!(t.spo_query(0, &mut rng()), Err(Error::Precondition(_))));
        assert!(matches!(t.fpo_query(0, &mut rng()), Err(Error::Precondition(_))));
    }

    #[test]
    fn spo_on_constant_returns_other_point() {
        let t = constant(3, 0, 2);
        let mut rng = rng();
        for x in 0..8 {
            match t.spo_query(x, &mut rng).unwrap() {
                OracleAnswer::Single(i) => assert_ne!(i.m, x),
                other => panic!("{other:?}"),
            }
        }
        assert!(t.spo_query(8, &mut rng).is_err());
    }

    #[test]
    fn spo_uniform_over_hand_built_fiber() {
        // {1, 4, 6} -> 5, everything else injective-ish elsewhere.
        let p = Params::new(3, 0, 3).unwrap();
        let t = FunctionTable::from_entries(p, vec![0, 5, 1, 2, 5, 3, 5, 4]).unwrap();
        let mut rng = rng();
        let (mut a, mut b) = (0u32, 0u32);
        let n = 10_000;
        for _ in 0..n {
            match t.spo_query(1, &mut rng).unwrap() {
                OracleAnswer::Single(i) if i.m == 4 => a += 1,
                OracleAnswer::Single(i) if i.m == 6 => b += 1,
                other => panic!("{other:?}"),
            }
        }
        assert!((a as f64 / n as f64 - 0.5).abs() <= 0.02);
        assert_eq!(a + b, n);
    }

    #[test]
    fn fpo_constant_and_empty_fiber() {
        let t = constant(3, 0, 2);
        let mut rng = rng();
        let mut seen = [0u32; 8];
        for _ in 0..4000 {
            match t.fpo_query(0, &mut rng).unwrap() {
                OracleAnswer::Single(i) => seen[i.m as usize] += 1,
                other => panic!("{other:?}"),
            }
        }
        assert!(seen.iter().all(|&c| c > 350));
        assert!(t.fpo_query(1, &mut rng).unwrap().is_bottom());
        assert!(t.fpo_query(4, &mut rng).is_err());
    }

    #[test]
    fn fpo_uniform_over_pair_fiber() {
        let p = Params::new(2, 0, 2).unwrap();
        let t = FunctionTable::from_entries(p, vec![1, 3, 1, 0]).unwrap();
        let mut rng = rng();
        let n = 10_000;
        let zeros = (0..n)
            .filter(|_| t.fpo_query(1, &mut rng).unwrap() == OracleAnswer::Single(Input::new(0, 0)))
            .count();
        assert!((zeros as f64 / n as f64 - 0.5).abs() <= 0.02);
    }

    #[test]
    fn common_cp_co_respects_prefix() {
        let t = constant(3, 2, 2);
        let mut rng = rng();
        for r in 0..4 {
            match t.common_cp_co_query(r, &mut rng).unwrap() {
                OracleAnswer::Pair(a, b) => {
                    assert_eq!((a.r, b.r), (r, r));
                    assert_ne!(a.m, b.m);
                }
                other => panic!("{other:?}"),
            }
        }
        assert!(t.common_cp_co_query(4, &mut rng).is_err());
    }

    #[test]
    fn common_cp_co_injective_class_is_bottom() {
        // Class r = 1 is injective, class r = 0 is constant.
        let p = Params::new(2, 1, 2).unwrap();
        let t = FunctionTable::from_fn(p, |i| if i.r == 1 { i.m } else { 0 }).unwrap();
        let mut rng = rng();
        for _ in 0..100 {
            assert!(t.common_cp_co_query(1, &mut rng).unwrap().is_bottom());
            assert!(!t.common_cp_co_query(0, &mut rng).unwrap().is_bottom());
        }
    }

    #[test]
    fn cp_co_same_prefix_matches_common() {
        let p = Params::new(4, 2, 2).unwrap();
        let t = FunctionTable::random(p, &mut rng()).unwrap();
        let (mut a, mut b) = (ChaCha8Rng::seed_from_u64(9), ChaCha8Rng::seed_from_u64(9));
        for r in 0..4 {
            for _ in 0..50 {
                assert_eq!(t.cp_co_query(r, r, &mut a).unwrap(), t.common_cp_co_query(r, &mut b).unwrap());
            }
        }
    }

    #[test]
    fn cp_co_disjoint_images_is_bottom() {
        let p = Params::new(2, 1, 2).unwrap();
        let t = FunctionTable::from_fn(p, |i| if i.r == 0 { i.m % 2 } else { 2 + i.m % 2 }).unwrap();
        let mut rng = rng();
        for _ in 0..100 {
            assert!(t.cp_co_query(0, 1, &mut rng).unwrap().is_bottom());
        }
    }

    #[test]
    fn cp_co_second_point_uniform_on_hand_built_fiber() {
        // Class 0: every m -> 0. Class 1: fiber of 0 is {1, 2}.
        let p = Params::new(2, 1, 2).unwrap();
        let t = FunctionTable::from_fn(p, |i| match (i.r, i.m) {
            (0, _) => 0,
            (1, 1) | (1, 2) => 0,
            (1, m) => m | 1,
            _ => unreachable!(),
        })
        .unwrap();
        let mut rng = rng();
        let n = 10_000;
        let mut ones = 0;
        for _ in 0..n {
            match t.cp_co_query(0, 1, &mut rng).unwrap() {
                OracleAnswer::Pair(a, b) => {
                    assert_eq!((a.r, b.r), (0, 1));
                    assert!(b.m == 1 || b.m == 2);
                    ones += (b.m == 1) as u32;
                }
                other => panic!("{other:?}"),
            }
        }
        assert!((ones as f64 / n as f64 - 0.5).abs() <= 0.02);
    }

    #[test]
    fn cp_spo_constant_and_disjoint() {
        let t = constant(2, 2, 3);
        let mut rng = rng();
        for x in 0..16 {
            for r2 in 0..4 {
                match t.cp_spo_query(x, r2, &mut rng).unwrap() {
                    OracleAnswer::Single(i) => {
                        assert_eq!(i.r, r2);
                        assert_ne!(t.params().join(i), x);
                    }
                    other => panic!("{other:?}"),
                }
            }
        }
        let p = Params::new(2, 1, 2).unwrap();
        let d = FunctionTable::from_fn(p, |i| if i.r == 0 { 0 } else { 1 }).unwrap();
        assert!(d.cp_spo_query(0b000, 1, &mut rng).unwrap().is_bottom());
    }

    #[test]
    fn cp_fpo_uniform_over_triple() {
        let p = Params::new(3, 1, 2).unwrap();
        let t = FunctionTable::from_fn(p, |i| match (i.r, i.m) {
            (1, 0) | (1, 3) | (1, 5) => 2,
            (1, _) => 1,
            _ => 2,
        })
        .unwrap();
        let mut rng = rng();
        let n = 10_000;
        let mut counts = [0u32; 8];
        for _ in 0..n {
            match t.cp_fpo_query(2, 1, &mut rng).unwrap() {
                OracleAnswer::Single(i) => {
                    assert_eq!(i.r, 1);
                    counts[i.m as usize] += 1;
                }
                other => panic!("{other:?}"),
            }
        }
        for m in [0, 3, 5] {
            assert!((counts[m] as f64 / n as f64 - 1.0 / 3.0).abs() <= 0.02);
        }
        assert!(t.cp_fpo_query(3, 1, &mut rng).unwrap().is_bottom());
    }

    #[test]
    fn constant_cp_fpo_covers_class() {
        let t = constant(2, 1, 2);
        let mut rng = rng();
        let mut seen = [false; 4];
        for _ in 0..200 {
            if let OracleAnswer::Single(i) = t.cp_fpo_query(0, 1, &mut rng).unwrap() {
                assert_eq!(i.r, 1);
                seen[i.m as usize] = true;
            }
        }
        assert!(seen.iter().all(|&s| s));
    }
}
