use crate::error::{Error, Result};
use crate::fincat::FinCat;

/// Bounds on every exhaustive search. Exceeding one is an error, never a
/// silent truncation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    pub max_objects: usize,
    pub max_morphisms: usize,
    /// Upper bound on the length of any enumerated result list.
    pub max_results: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_objects: 64,
            max_morphisms: 512,
            max_results: 1_000_000,
        }
    }
}

impl Caps {
    pub fn check_category(&self, cat: &FinCat, what: &str) -> Result<()> {
        if cat.num_objects() > self.max_objects {
            return Err(Error::SizeCapExceeded {
                what: format!("objects of {what}"),
                actual: cat.num_objects(),
                cap: self.max_objects,
            });
        }
        if cat.num_morphisms() > self.max_morphisms {
            return Err(Error::SizeCapExceeded {
                what: format!("morphisms of {what}"),
                actual: cat.num_morphisms(),
                cap: self.max_morphisms,
            });
        }
        Ok(())
    }

    pub fn check_results(&self, count: usize, what: &str) -> Result<()> {
        if count > self.max_results {
            return Err(Error::SizeCapExceeded {
                what: what.to_string(),
                actual: count,
                cap: self.max_results,
            });
        }
        Ok(())
    }
}
