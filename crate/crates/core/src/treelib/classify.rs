use serde::{Deserialize, Serialize};

use super::stats::is_simple;
use super::tree::Tree;
use crate::error::{Error, Result};

/// Branch proportion and tolerance defining the short-tree class.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TreeClassParams {
    /// Target share of the smaller branch, in (0, 1/2).
    pub ratio: f64,
    /// Allowed deviation, in (0, min(ratio, 1 - ratio)).
    pub tolerance: f64,
}

impl TreeClassParams {
    pub fn new(ratio: f64, tolerance: f64) -> Result<Self> {
        if !(ratio > 0.0 && ratio < 0.5) {
            return Err(Error::InvalidParam(format!("ratio {ratio} not in (0, 1/2)")));
        }
        if !(tolerance > 0.0 && tolerance < ratio.min(1.0 - ratio)) {
            return Err(Error::InvalidParam(format!(
                "tolerance {tolerance} not in (0, {})",
                ratio.min(1.0 - ratio)
            )));
        }
        Ok(TreeClassParams { ratio, tolerance })
    }

    pub fn admits(&self, share: f64) -> bool {
        share >= self.ratio - self.tolerance && share <= self.ratio + self.tolerance
    }
}

/// `(simple, short)` membership.
///
/// Simple: no vertex has two children. Short: every internal vertex has two
/// children, and at every such vertex the smaller branch holds a share of
/// the vertex's subtree size inside `[ratio - tolerance, ratio + tolerance]`.
/// A vertex whose two branches are both leaves has no choice of split and
/// is not tested. The single leaf is both simple and short.
pub fn classify(t: &Tree, p: &TreeClassParams) -> (bool, bool) {
    (is_simple(t), is_short(t, p))
}

fn is_short(t: &Tree, p: &TreeClassParams) -> bool {
    match t.children() {
        [] => true,
        [_] => false,
        [big, small] => {
            if big.is_leaf() && small.is_leaf() {
                return true;
            }
            // children are stored largest first
            let share = small.size() as f64 / t.size() as f64;
            p.admits(share) && is_short(big, p) && is_short(small, p)
        }
        _ => unreachable!("at most two children"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::treelib::tree::{decode, leaf};

    #[test]
    fn params_validation() {
        assert!(TreeClassParams::new(0.45, 0.06).is_ok());
        assert!(TreeClassParams::new(0.5, 0.1).is_err());
        assert!(TreeClassParams::new(0.3, 0.3).is_err());
        assert!(TreeClassParams::new(0.3, 0.0).is_err());
    }

    #[test]
    fn examples() {
        let p = TreeClassParams::new(0.45, 0.06).unwrap();
        assert_eq!(classify(&decode("[[[o]]]").unwrap(), &p), (true, false));
        assert_eq!(classify(&Tree::perfect(2), &p), (false, true));
        assert_eq!(classify(&leaf(), &p), (true, true));
        // root split 1/5 is outside [0.39, 0.51]
        assert_eq!(classify(&decode("[o,[o,o]]").unwrap(), &p), (false, false));
        let q = TreeClassParams::new(0.2, 0.05).unwrap();
        assert_eq!(classify(&decode("[o,[o,o]]").unwrap(), &q), (false, true));
    }
}
