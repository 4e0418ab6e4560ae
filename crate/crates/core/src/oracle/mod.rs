//! Ideal oracles over an exhaustive random function.

mod ideal;
mod params;
mod table;

use std::cell::Cell;
use std::rc::Rc;

pub use ideal::OracleAnswer;
pub use params::{Input, Params, TABLE_INPUT_LIMIT};
pub use table::FunctionTable;

pub(crate) use params::check_width;

use crate::error::Result;

/// Handle through which a signature scheme reaches its hash function.
pub trait HashOracle {
    fn params(&self) -> Params;

    /// Hash of the flat input `x = (m << t) | r`.
    fn hash(&mut self, x: u32) -> Result<u32>;
}

impl<O: HashOracle + ?Sized> HashOracle for Box<O> {
    fn params(&self) -> Params {
        (**self).params()
    }

    fn hash(&mut self, x: u32) -> Result<u32> {
        (**self).hash(x)
    }
}

/// Random-oracle access to a [`FunctionTable`].
#[derive(Debug, Clone, Copy)]
pub struct TableOracle<'a>(pub &'a FunctionTable);

impl HashOracle for TableOracle<'_> {
    fn params(&self) -> Params {
        self.0.params()
    }

    fn hash(&mut self, x: u32) -> Result<u32> {
        self.0.ro_query(x)
    }
}

/// Hash given by a closure, for forcing specific values.
pub struct FnOracle<F> {
    params: Params,
    f: F,
}

impl<F: FnMut(u32) -> u32> FnOracle<F> {
    pub fn new(params: Params, f: F) -> Self {
        Self { params, f }
    }
}

impl<F: FnMut(u32) -> u32> HashOracle for FnOracle<F> {
    fn params(&self) -> Params {
        self.params
    }

    fn hash(&mut self, x: u32) -> Result<u32> {
        self.params.check_flat(x)?;
        let y = (self.f)(x);
        self.params.check_output(y)?;
        Ok(y)
    }
}

/// Counts the queries passing through to `inner`.
pub struct CountingOracle<O> {
    inner: O,
    count: Rc<Cell<u64>>,
}

impl<O: HashOracle> CountingOracle<O> {
    pub fn new(inner: O) -> Self {
        Self { inner, count: Rc::new(Cell::new(0)) }
    }

    /// Shared view of the query counter.
    pub fn counter(&self) -> Rc<Cell<u64>> {
        Rc::clone(&self.count)
    }
}

impl<O: HashOracle> HashOracle for CountingOracle<O> {
    fn params(&self) -> Params {
        self.inner.params()
    }

    fn hash(&mut self, x: u32) -> Result<u32> {
        self.count.set(self.count.get() + 1);
        self.inner.hash(x)
    }
}
