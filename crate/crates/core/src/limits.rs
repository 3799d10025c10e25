/// Size caps for the exhaustive searches.
///
/// Every engine enumerates worlds or candidate subsets explicitly, so the caps
/// bound running time and memory rather than expressiveness.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest vocabulary whose worlds may be enumerated (2^n worlds).
    pub max_vocab: usize,
    /// Largest default theory searched for extensions (2^n rule subsets).
    pub max_rules: usize,
    /// Largest number of distinct believed/disbelieved formulas in an
    /// autoepistemic premise set (2^n belief guesses).
    pub max_modal_atoms: usize,
    /// Peel orders explored per theory when building sequences.
    pub max_orderings: usize,
    /// Largest candidate set for threshold-order enumeration.
    pub max_threshold_candidates: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_vocab: 20,
            max_rules: 16,
            max_modal_atoms: 16,
            max_orderings: 1000,
            max_threshold_candidates: 10,
        }
    }
}
