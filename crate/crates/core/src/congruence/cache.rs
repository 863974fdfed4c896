use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::Result;
use crate::oracle::BiregularConstraint;
use crate::series::{check_order, TruncatedSeries};

use super::gen_function;

type Slot = Arc<OnceLock<Arc<TruncatedSeries>>>;

/// Generating functions keyed by `(constraint, order)`.
///
/// Concurrent requests for the same key share one expansion: the first caller computes,
/// the rest block on the slot until it is filled.
#[derive(Default)]
pub struct GeneratingFunctionCache {
    slots: Mutex<HashMap<(BiregularConstraint, usize), Slot>>,
}

impl GeneratingFunctionCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn global() -> &'static Self {
        static GLOBAL: OnceLock<GeneratingFunctionCache> = OnceLock::new();
        GLOBAL.get_or_init(Self::new)
    }

    pub fn get(&self, c: BiregularConstraint, order: usize) -> Result<Arc<TruncatedSeries>> {
        check_order(order)?;
        let slot = {
            let mut slots = self.slots.lock().expect("cache lock poisoned");
            slots.entry((c, order)).or_default().clone()
        };
        let series = slot.get_or_init(|| {
            // order >= 1 and c is a valid constraint, so the expansion cannot fail
            Arc::new(gen_function(c, order).expect("valid generating function"))
        });
        Ok(series.clone())
    }

    pub fn len(&self) -> usize {
        self.slots.lock().expect("cache lock poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
