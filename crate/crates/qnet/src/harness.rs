//! Parallel map over trial indices.
//!
//! Trial `t` always draws from `stream_rng(seed, t)`, so results do not depend
//! on the worker count, and they are returned in trial order.

use rayon::prelude::*;
use rayon::ThreadPool;

use crate::CliError;

#[derive(Debug)]
pub struct Harness {
    pool: Option<ThreadPool>,
}

impl Harness {
    /// `threads == 0` uses the global rayon pool.
    pub fn new(threads: usize) -> Result<Self, CliError> {
        let pool = if threads == 0 {
            None
        } else {
            Some(
                rayon::ThreadPoolBuilder::new()
                    .num_threads(threads)
                    .build()
                    .map_err(CliError::runtime)?,
            )
        };
        Ok(Harness { pool })
    }

    pub fn map<T, E, F>(&self, trials: u64, f: F) -> Result<Vec<T>, E>
    where
        T: Send,
        E: Send,
        F: Fn(u64) -> Result<T, E> + Sync + Send,
    {
        let run = || (0..trials).into_par_iter().map(&f).collect::<Result<Vec<T>, E>>();
        match &self.pool {
            Some(pool) => pool.install(run),
            None => run(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use qnet_core::noise::stream_rng;
    use rand::Rng;

    #[test]
    fn order_and_thread_independence() {
        let draw = |t: u64| -> Result<(u64, u64), ()> { Ok((t, stream_rng(9, t).random())) };
        let a = Harness::new(1).unwrap().map(500, draw).unwrap();
        let b = Harness::new(4).unwrap().map(500, draw).unwrap();
        let c = Harness::new(0).unwrap().map(500, draw).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
        assert!(a.iter().enumerate().all(|(i, r)| r.0 == i as u64));
    }

    #[test]
    fn first_error_is_reported() {
        let r: Result<Vec<u64>, String> = Harness::new(2).unwrap().map(100, |t| if t == 50 { Err("boom".into()) } else { Ok(t) });
        assert_eq!(r.unwrap_err(), "boom");
    }
}
