use crate::error::BoundExceeded;

/// Limits for the exhaustive oracles. Searches refuse rather than truncate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBound {
    /// Total number of carrier elements across both groupoids of a
    /// morphism enumeration.
    pub max_elements: usize,
    /// Largest Hom-set allowed in a morphism enumeration.
    pub max_hom: usize,
    /// Number of candidate star tables in a cover-morphism enumeration.
    pub max_tables: usize,
    /// Star points searched over in an automorphism search.
    pub max_star_points: usize,
}

impl Default for SearchBound {
    fn default() -> Self {
        SearchBound { max_elements: 16, max_hom: 24, max_tables: 1 << 22, max_star_points: 8 }
    }
}

impl SearchBound {
    /// Default bound with the element limit replaced.
    pub fn with_elements(max_elements: usize) -> Self {
        SearchBound { max_elements, ..Self::default() }
    }

    pub(crate) fn check(what: &'static str, actual: usize, limit: usize) -> Result<(), BoundExceeded> {
        if actual > limit {
            Err(BoundExceeded { what, actual, limit })
        } else {
            Ok(())
        }
    }
}
