//! Worker-count control for the data-parallel loops.
//!
//! Every bulk operation takes an [`Exec`]. With the `parallel` feature (on by
//! default) a job count other than 1 runs the work on a dedicated rayon pool;
//! without the feature, or with `jobs == 1`, the same closures run on the
//! calling thread. Results always come back in input order, so output is
//! identical for every worker count.

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Exec {
    jobs: usize,
}

impl Default for Exec {
    fn default() -> Self {
        Self::sequential()
    }
}

impl Exec {
    pub fn sequential() -> Self {
        Self { jobs: 1 }
    }

    /// `jobs == 0` uses one worker per available core.
    pub fn with_jobs(jobs: usize) -> Self {
        Self { jobs }
    }

    pub fn parallel() -> Self {
        Self::with_jobs(0)
    }

    pub fn jobs(&self) -> usize {
        self.jobs
    }

    pub fn is_parallel(&self) -> bool {
        cfg!(feature = "parallel") && self.jobs != 1
    }

    /// Ordered map over `items`.
    pub fn map<T, R, F>(&self, items: Vec<T>, f: F) -> Vec<R>
    where
        T: Send,
        R: Send,
        F: Fn(T) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            use rayon::prelude::*;
            return self.install(|| items.into_par_iter().map(&f).collect());
        }
        items.into_iter().map(f).collect()
    }

    /// Ordered map over `0..len`.
    pub fn map_range<R, F>(&self, len: usize, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(usize) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            use rayon::prelude::*;
            return self.install(|| (0..len).into_par_iter().map(&f).collect());
        }
        (0..len).map(f).collect()
    }

    #[cfg(feature = "parallel")]
    fn install<R: Send>(&self, op: impl FnOnce() -> R + Send) -> R {
        match rayon::ThreadPoolBuilder::new().num_threads(self.jobs).build() {
            Ok(pool) => pool.install(op),
            // Fall back to the global pool if a dedicated one cannot be built.
            Err(_) => op(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved_for_any_worker_count() {
        let items: Vec<u64> = (0..1000).collect();
        let expected: Vec<u64> = items.iter().map(|x| x * x).collect();
        for jobs in [0, 1, 2, 4] {
            let exec = Exec::with_jobs(jobs);
            assert_eq!(exec.map(items.clone(), |x| x * x), expected);
            assert_eq!(exec.map_range(1000, |x| (x as u64) * (x as u64)), expected);
        }
    }
}
