use super::tree::{graft1, graft2, leaf, Tree};
use crate::error::{Error, Result};

/// Default largest size [`enumerate`] will produce.
pub const DEFAULT_SIZE_CEILING: usize = 16;

/// Default largest depth [`enumerate_depth_class`] will produce. Depth 4
/// already has 2278 trees; depth 5 would have about 2.6 million.
pub const DEFAULT_DEPTH_CEILING: i64 = 4;

/// All canonical trees of sizes `1..=max_size`, grouped by size
/// (`result[n - 1]` holds the trees with `n` vertices), each group sorted.
pub fn enumerate(max_size: usize) -> Result<Vec<Vec<Tree>>> {
    enumerate_with_ceiling(max_size, DEFAULT_SIZE_CEILING)
}

pub fn enumerate_with_ceiling(max_size: usize, ceiling: usize) -> Result<Vec<Vec<Tree>>> {
    if max_size == 0 {
        return Err(Error::InvalidParam("max_size must be at least 1".into()));
    }
    if max_size > ceiling {
        return Err(Error::Ceiling {
            requested: max_size,
            ceiling,
        });
    }
    let mut by_size: Vec<Vec<Tree>> = vec![vec![leaf()]];
    for n in 2..=max_size {
        let mut level = Vec::new();
        // one child of size n - 1
        for t in &by_size[n - 2] {
            level.push(graft1(t));
        }
        // two children of sizes a >= b with a + b = n - 1
        for b in 1..=(n - 1) / 2 {
            let a = n - 1 - b;
            let (big, small) = (&by_size[a - 1], &by_size[b - 1]);
            if a == b {
                for i in 0..big.len() {
                    for j in i..big.len() {
                        level.push(graft2(&big[i], &big[j]));
                    }
                }
            } else {
                for x in big {
                    for y in small {
                        level.push(graft2(x, y));
                    }
                }
            }
        }
        level.sort();
        by_size.push(level);
    }
    Ok(by_size)
}

/// Number of trees of each size, `counts[n - 1] = Z_n`.
pub fn counts(max_size: usize) -> Result<Vec<usize>> {
    Ok(enumerate(max_size)?.iter().map(Vec::len).collect())
}

/// Every tree whose leaves are at distance at most `n` from the root.
/// Empty for `n = -1`.
pub fn enumerate_depth_class(n: i64) -> Result<Vec<Tree>> {
    enumerate_depth_class_with_ceiling(n, DEFAULT_DEPTH_CEILING)
}

pub fn enumerate_depth_class_with_ceiling(n: i64, ceiling: i64) -> Result<Vec<Tree>> {
    if n < -1 {
        return Err(Error::InvalidParam(format!("depth class {n} < -1")));
    }
    if n > ceiling {
        return Err(Error::Ceiling {
            requested: n as usize,
            ceiling: ceiling as usize,
        });
    }
    let mut class: Vec<Tree> = Vec::new();
    for _ in 0..=n {
        let prev = class;
        let mut next = Vec::with_capacity(1 + prev.len() * (prev.len() + 3) / 2);
        next.push(leaf());
        for t in &prev {
            next.push(graft1(t));
        }
        for i in 0..prev.len() {
            for j in i..prev.len() {
                next.push(graft2(&prev[i], &prev[j]));
            }
        }
        next.sort();
        class = next;
    }
    Ok(class)
}
