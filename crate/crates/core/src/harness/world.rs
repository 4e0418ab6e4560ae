use std::cell::RefCell;
use std::rc::Rc;

use rand_chacha::ChaCha8Rng;

use super::model::ExtraQuery;
use crate::error::{Error, Result};
use crate::oracle::{FunctionTable, HashOracle, OracleAnswer, Params};
use crate::simulation::{cp_co_sim, prefix_ro, LazyHashState};

/// Hash function of one game: an exhaustive table or the exact lazy simulator.
pub enum World {
    Ideal { table: FunctionTable, rng: ChaCha8Rng },
    Lazy { state: LazyHashState, rng: ChaCha8Rng },
}

impl World {
    pub fn params(&self) -> Params {
        match self {
            World::Ideal { table, .. } => table.params(),
            World::Lazy { state, .. } => state.params(),
        }
    }

    pub fn hash(&mut self, x: u32) -> Result<u32> {
        match self {
            World::Ideal { table, .. } => table.ro_query(x),
            World::Lazy { state, rng } => prefix_ro(state, x, rng),
        }
    }

    pub fn extra(&mut self, query: ExtraQuery) -> Result<OracleAnswer> {
        match self {
            World::Ideal { table, rng } => match query {
                ExtraQuery::Co => table.co_query(rng),
                ExtraQuery::Spo { x } => table.spo_query(x, rng),
                ExtraQuery::Fpo { y } => table.fpo_query(y, rng),
                ExtraQuery::CommonCpCo { r } => table.common_cp_co_query(r, rng),
                ExtraQuery::CpCo { r, r2 } => table.cp_co_query(r, r2, rng),
                ExtraQuery::CpSpo { x, r2 } => table.cp_spo_query(x, r2, rng),
                ExtraQuery::CpFpo { y, r } => table.cp_fpo_query(y, r, rng),
            },
            World::Lazy { state, rng } => match query {
                ExtraQuery::Co if state.params().t == 0 => cp_co_sim(state, 0, 0, rng),
                ExtraQuery::CommonCpCo { r } => cp_co_sim(state, r, r, rng),
                ExtraQuery::CpCo { r, r2 } => cp_co_sim(state, r, r2, rng),
                _ => Err(Error::Config(format!("the lazy backend cannot answer {}", query.kind().name()))),
            },
        }
    }
}

/// Hash handle sharing a [`World`] with the game's extra oracle.
#[derive(Clone)]
pub struct WorldOracle {
    params: Params,
    world: Rc<RefCell<World>>,
}

impl WorldOracle {
    pub fn new(world: Rc<RefCell<World>>) -> Self {
        let params = world.borrow().params();
        Self { params, world }
    }
}

impl HashOracle for WorldOracle {
    fn params(&self) -> Params {
        self.params
    }

    fn hash(&mut self, x: u32) -> Result<u32> {
        self.world.borrow_mut().hash(x)
    }
}
