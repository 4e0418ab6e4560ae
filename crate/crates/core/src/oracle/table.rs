use rand::Rng;

use super::params::{Input, Params, TABLE_INPUT_LIMIT};
use crate::error::{Error, Result};

/// Exhaustive truth table of a function `h: M x R -> Y` together with its
/// fiber decomposition per prefix class.
///
/// Immutable once built; safe to share between threads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionTable {
    params: Params,
    /// `entries[x]` for flat input `x = (m << t) | r`.
    entries: Vec<u32>,
    /// Message parts grouped by `(r, y)`, ascending within each group.
    members: Vec<u32>,
    index: FiberIndex,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum FiberIndex {
    /// `offsets[(r << k) | y]..offsets[(r << k) | y + 1]` into `members`.
    Dense(Vec<u32>),
    /// Sorted `(key, start)` pairs for non-empty fibers; a fiber ends where the next begins.
    Sparse(Vec<(u64, u32)>),
}

impl FunctionTable {
    /// Draws a uniformly random function, one `k`-bit output per input in
    /// ascending flat-input order.
    pub fn random<R: Rng + ?Sized>(params: Params, rng: &mut R) -> Result<Self> {
        check_limit(params)?;
        let bound = params.outputs() as u32;
        let entries = (0..params.inputs()).map(|_| rng.random_range(0..bound)).collect();
        Ok(Self::build(params, entries))
    }

    /// Builds a table from explicit outputs indexed by flat input.
    pub fn from_entries(params: Params, entries: Vec<u32>) -> Result<Self> {
        check_limit(params)?;
        if entries.len() as u64 != params.inputs() {
            return Err(Error::InvalidParams(format!(
                "expected {} entries, got {}",
                params.inputs(),
                entries.len()
            )));
        }
        for &y in &entries {
            params.check_output(y)?;
        }
        Ok(Self::build(params, entries))
    }

    pub fn from_fn(params: Params, f: impl Fn(Input) -> u32) -> Result<Self> {
        check_limit(params)?;
        let entries = (0..params.inputs() as u32).map(|x| f(params.split(x))).collect();
        Self::from_entries(params, entries)
    }

    fn build(params: Params, entries: Vec<u32>) -> Self {
        let key = |x: u32| -> u64 {
            let Input { r, .. } = params.split(x);
            ((r as u64) << params.k) | entries[x as usize] as u64
        };
        let n = entries.len();
        let buckets = 1u64 << (params.t + params.k);
        if buckets <= 4 * n as u64 {
            let mut offsets = vec![0u32; buckets as usize + 1];
            for x in 0..n as u32 {
                offsets[key(x) as usize + 1] += 1;
            }
            for i in 1..offsets.len() {
                offsets[i] += offsets[i - 1];
            }
            let mut cursor = offsets.clone();
            let mut members = vec![0u32; n];
            for x in 0..n as u32 {
                let slot = &mut cursor[key(x) as usize];
                members[*slot as usize] = params.split(x).m;
                *slot += 1;
            }
            Self { params, entries, members, index: FiberIndex::Dense(offsets) }
        } else {
            let mut keyed: Vec<(u64, u32)> = (0..n as u32).map(|x| (key(x), params.split(x).m)).collect();
            keyed.sort_unstable();
            let mut starts = Vec::new();
            for (i, &(k, _)) in keyed.iter().enumerate() {
                if i == 0 || keyed[i - 1].0 != k {
                    starts.push((k, i as u32));
                }
            }
            let members = keyed.into_iter().map(|(_, m)| m).collect();
            Self { params, entries, members, index: FiberIndex::Sparse(starts) }
        }
    }

    pub fn params(&self) -> Params {
        self.params
    }

    /// Raw outputs indexed by flat input.
    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    /// `h(m || r)`; the caller guarantees the input is in range.
    pub fn eval(&self, input: Input) -> u32 {
        self.entries[self.params.join(input) as usize]
    }

    /// Message parts `m` with `h(m || r) = y`, ascending.
    pub fn fiber(&self, y: u32, r: u32) -> &[u32] {
        let key = ((r as u64) << self.params.k) | y as u64;
        match &self.index {
            FiberIndex::Dense(offsets) => {
                if key as usize + 1 >= offsets.len() {
                    return &[];
                }
                &self.members[offsets[key as usize] as usize..offsets[key as usize + 1] as usize]
            }
            FiberIndex::Sparse(starts) => match starts.binary_search_by_key(&key, |&(k, _)| k) {
                Ok(i) => {
                    let end = starts.get(i + 1).map_or(self.members.len(), |&(_, s)| s as usize);
                    &self.members[starts[i].1 as usize..end]
                }
                Err(_) => &[],
            },
        }
    }

    /// `n_{y,r}`: number of preimages of `y` carrying prefix `r`.
    pub fn preimage_count(&self, y: u32, r: u32) -> usize {
        self.fiber(y, r).len()
    }
}

fn check_limit(params: Params) -> Result<()> {
    if params.input_bits() > TABLE_INPUT_LIMIT {
        Err(Error::ParamsTooLarge { bits: params.input_bits(), limit: TABLE_INPUT_LIMIT })
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn smallest_table() {
        let p = Params::new(1, 0, 1).unwrap();
        let t = FunctionTable::random(p, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        assert_eq!(t.entries().len(), 2);
        assert!(t.entries().iter().all(|&y| y < 2));
    }

    #[test]
    fn same_seed_same_table() {
        let p = Params::new(6, 3, 5).unwrap();
        let a = FunctionTable::random(p, &mut ChaCha8Rng::seed_from_u64(11)).unwrap();
        let b = FunctionTable::random(p, &mut ChaCha8Rng::seed_from_u64(11)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn too_large_rejected() {
        let p = Params::new(20, 5, 8).unwrap();
        let err = FunctionTable::random(p, &mut ChaCha8Rng::seed_from_u64(0)).unwrap_err();
        assert_eq!(err, Error::ParamsTooLarge { bits: 25, limit: 24 });
    }

    fn check_fibers(t: &FunctionTable) {
        let p = t.params();
        for r in 0..p.prefixes() as u32 {
            let mut total = 0;
            for y in 0..p.outputs() as u32 {
                let fib = t.fiber(y, r);
                assert!(fib.windows(2).all(|w| w[0] < w[1]));
                for &m in fib {
                    assert_eq!(t.eval(Input::new(m, r)), y);
                }
                total += fib.len() as u64;
            }
            assert_eq!(total, p.messages());
        }
    }

    #[test]
    fn fiber_counts_sum_per_prefix_dense() {
        // l=8, t=4, k=8 takes the dense index.
        let p = Params::new(8, 4, 8).unwrap();
        let t = FunctionTable::random(p, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
        assert!(matches!(t.index, FiberIndex::Dense(_)));
        check_fibers(&t);
    }

    #[test]
    fn fiber_counts_sum_per_prefix_sparse() {
        let p = Params::new(3, 2, 12).unwrap();
        let t = FunctionTable::random(p, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
        assert!(matches!(t.index, FiberIndex::Sparse(_)));
        check_fibers(&t);
        assert_eq!(t.fiber(4095, 3).len(), t.preimage_count(4095, 3));
    }

    #[test]
    fn from_entries_validates() {
        let p = Params::new(2, 0, 2).unwrap();
        assert!(FunctionTable::from_entries(p, vec![0, 1, 2]).is_err());
        assert!(FunctionTable::from_entries(p, vec![0, 1, 2, 4]).is_err());
        let t = FunctionTable::from_entries(p, vec![3, 1, 3, 0]).unwrap();
        assert_eq!(t.fiber(3, 0), &[0, 2]);
        assert!(t.fiber(2, 0).is_empty());
    }
}
