use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::spectral::{calb, SpectralField, Trajectory};
use crate::treelib::Tree;

/// Deepest tree the recursion will evaluate.
pub const MAX_PHI_DEPTH: usize = 64;

/// Deliberate defects in the tree recursion or weights. Exists so that the
/// test suite can show that the Picard identity detects them.
#[doc(hidden)]
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mutation {
    #[default]
    None,
    /// `phi([τ]) = B(S h, phi(τ))` and `phi([τ1 τ2]) = B(phi(τ1), phi(τ2))`
    DropGraftFactor,
    /// Every tree weighted by 1 instead of `1/σ(τ)`.
    DropSymmetryWeight,
}

/// Memo table for `phi(·; h)` with a fixed initial datum.
///
/// ```text
/// phi(o)        = 𝓑(S h, S h)
/// phi([τ])      = 2 𝓑(S h, phi(τ))
/// phi([τ1 τ2])  = 2 𝓑(phi(τ1), phi(τ2))
/// ```
///
/// Readers share the table; inserting takes the write lock. Values do not
/// depend on evaluation order.
#[derive(Debug)]
pub struct PhiCache {
    h: SpectralField,
    free: Arc<Trajectory>,
    zero: bool,
    mutation: Mutation,
    session: String,
    table: RwLock<HashMap<Tree, Arc<Trajectory>>>,
}

impl PhiCache {
    pub fn new(h: &SpectralField) -> Self {
        Self::with_mutation(h, Mutation::None)
    }

    #[doc(hidden)]
    pub fn with_mutation(h: &SpectralField, mutation: Mutation) -> Self {
        let mut hasher = Sha256::new();
        hasher.update(h.grid().spec().fingerprint().as_bytes());
        for v in h.values() {
            for c in v {
                hasher.update(c.re.to_le_bytes());
                hasher.update(c.im.to_le_bytes());
            }
        }
        PhiCache {
            h: h.clone(),
            free: Arc::new(Trajectory::semigroup(h)),
            zero: h.is_zero(),
            mutation,
            session: hex::encode(hasher.finalize()),
            table: RwLock::new(HashMap::new()),
        }
    }

    pub fn h(&self) -> &SpectralField {
        &self.h
    }

    /// `t ↦ S_t h`
    pub fn free(&self) -> &Arc<Trajectory> {
        &self.free
    }

    pub fn mutation(&self) -> Mutation {
        self.mutation
    }

    /// Digest of the grid fingerprint and the datum; identifies the session.
    pub fn session_key(&self) -> &str {
        &self.session
    }

    pub fn len(&self) -> usize {
        self.table.read().expect("memo lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn phi(&self, t: &Tree) -> Result<Arc<Trajectory>> {
        if t.depth() > MAX_PHI_DEPTH {
            return Err(Error::DepthGuard(t.depth()));
        }
        if let Some(v) = self.table.read().expect("memo lock").get(t) {
            return Ok(v.clone());
        }
        let value = if self.zero {
            Arc::new(Trajectory::zeros(self.h.grid()))
        } else {
            let children = t
                .children()
                .iter()
                .map(|c| self.phi(c))
                .collect::<Result<Vec<_>>>()?;
            Arc::new(combine(&self.free, &children, self.mutation)?)
        };
        let mut table = self.table.write().expect("memo lock");
        Ok(table.entry(t.clone()).or_insert(value).clone())
    }

    /// `1/σ(τ)` as a float, honouring the weight mutation.
    pub(crate) fn weight(&self, sigma: f64) -> f64 {
        match self.mutation {
            Mutation::DropSymmetryWeight => 1.0,
            _ => 1.0 / sigma,
        }
    }
}

fn combine(free: &Trajectory, children: &[Arc<Trajectory>], mutation: Mutation) -> Result<Trajectory> {
    let factor = if mutation == Mutation::DropGraftFactor { 1.0 } else { 2.0 };
    Ok(match children {
        [] => calb(free, free)?,
        [c] => calb(free, c)?.scaled(factor),
        [a, b] => calb(a, b)?.scaled(factor),
        _ => return Err(Error::Arity(children.len())),
    })
}

/// `phi(τ; h)` by plain recursion, recomputing every subtree.
pub fn phi_uncached(t: &Tree, h: &SpectralField) -> Result<Trajectory> {
    fn go(t: &Tree, free: &Trajectory, depth: usize) -> Result<Trajectory> {
        if depth > MAX_PHI_DEPTH {
            return Err(Error::DepthGuard(depth));
        }
        let children = t
            .children()
            .iter()
            .map(|c| go(c, free, depth + 1).map(Arc::new))
            .collect::<Result<Vec<_>>>()?;
        combine(free, &children, Mutation::None)
    }
    if h.is_zero() {
        return Ok(Trajectory::zeros(h.grid()));
    }
    go(t, &Trajectory::semigroup(h), 0)
}

/// `phi(τ; h)` through a fresh memo table.
pub fn phi(t: &Tree, h: &SpectralField) -> Result<Trajectory> {
    Ok(PhiCache::new(h).phi(t)?.as_ref().clone())
}
