//! Trial scheduling.
//!
//! With the `parallel` feature (default) trials run on a rayon pool; without
//! it every executor degrades to an in-order loop. Output order always
//! matches input order, so results never depend on the worker count.

/// Environment variable holding the default worker count.
pub const WORKERS_ENV: &str = "RPE_LAB_WORKERS";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Executor {
    Sequential,
    /// `workers == 0` lets rayon pick.
    Parallel {
        workers: usize,
    },
}

impl Default for Executor {
    fn default() -> Self {
        Self::from_env()
    }
}

impl Executor {
    pub fn parallel(workers: usize) -> Self {
        Self::Parallel { workers }
    }

    /// `RPE_LAB_WORKERS=1` means sequential; unset or unparsable means all cores.
    pub fn from_env() -> Self {
        match std::env::var(WORKERS_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
        {
            Some(1) => Self::Sequential,
            Some(n) => Self::Parallel { workers: n },
            None => Self::Parallel { workers: 0 },
        }
    }

    pub fn is_parallel(&self) -> bool {
        cfg!(feature = "parallel") && matches!(self, Self::Parallel { .. })
    }

    pub fn map<T, R, F>(&self, items: Vec<T>, f: F) -> Vec<R>
    where
        T: Send,
        R: Send,
        F: Fn(T) -> R + Sync + Send,
    {
        match *self {
            #[cfg(feature = "parallel")]
            Self::Parallel { workers } => par_map(workers, items, f),
            _ => items.into_iter().map(f).collect(),
        }
    }
}

#[cfg(feature = "parallel")]
fn par_map<T, R, F>(workers: usize, items: Vec<T>, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Sync + Send,
{
    use rayon::prelude::*;

    if workers == 0 {
        return items.into_par_iter().map(f).collect();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
        Ok(pool) => pool.install(|| items.into_par_iter().map(f).collect()),
        Err(e) => {
            log::warn!("could not build a {workers}-thread pool ({e}); using the global pool");
            items.into_par_iter().map(f).collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        let items: Vec<u64> = (0..1000).collect();
        let want: Vec<u64> = items.iter().map(|x| x * x).collect();
        for ex in [
            Executor::Sequential,
            Executor::parallel(1),
            Executor::parallel(4),
            Executor::parallel(0),
        ] {
            assert_eq!(ex.map(items.clone(), |x| x * x), want);
        }
    }
}
