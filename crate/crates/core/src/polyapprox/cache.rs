//! Memoized constructions shared across runs and threads.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use super::{approx_sqrt_log, make_sk, make_step_poly_with_floor, BoundedPoly};
use crate::error::Result;
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Key {
    Step { phi: u64, eps: u64, floor: u64 },
    Sk { k: usize, eta: u64 },
    SqrtLog { beta: u64, eta: u64 },
}

type Slot<T> = Arc<OnceLock<Result<Arc<BoundedPoly<T>>>>>;

/// Each distinct construction runs once; concurrent requests for the same
/// polynomial wait for the first one.
#[derive(Debug, Default)]
pub struct PolyCache<T = f64> {
    slots: Mutex<HashMap<Key, Slot<T>>>,
}

impl<T: Real> PolyCache<T> {
    pub fn new() -> Self {
        Self {
            slots: Mutex::new(HashMap::new()),
        }
    }

    fn get(&self, key: Key, build: impl FnOnce() -> Result<BoundedPoly<T>>) -> Result<Arc<BoundedPoly<T>>> {
        let slot = {
            let mut map = self.slots.lock().expect("poly cache poisoned");
            map.entry(key).or_default().clone()
        };
        slot.get_or_init(|| build().map(Arc::new)).clone()
    }

    pub fn step(&self, phi: T, eps: T, floor: T) -> Result<Arc<BoundedPoly<T>>> {
        let key = Key::Step {
            phi: phi.to_f64_lossy().to_bits(),
            eps: eps.to_f64_lossy().to_bits(),
            floor: floor.to_f64_lossy().to_bits(),
        };
        self.get(key, || make_step_poly_with_floor(phi, eps, floor))
    }

    pub fn sk(&self, k: usize, eta: T) -> Result<Arc<BoundedPoly<T>>> {
        let key = Key::Sk {
            k,
            eta: eta.to_f64_lossy().to_bits(),
        };
        self.get(key, || make_sk(k, eta))
    }

    pub fn sqrt_log(&self, beta: T, eta: T) -> Result<Arc<BoundedPoly<T>>> {
        let key = Key::SqrtLog {
            beta: beta.to_f64_lossy().to_bits(),
            eta: eta.to_f64_lossy().to_bits(),
        };
        self.get(key, || approx_sqrt_log(beta, eta))
    }

    pub fn len(&self) -> usize {
        self.slots.lock().expect("poly cache poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
