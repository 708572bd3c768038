use std::collections::HashMap;
use std::hash::Hash;
use std::sync::Arc;

use parking_lot::RwLock;
use thiserror::Error;

use crate::ncalg::{presets, Algebra, AlgebraError, NcElement};
use crate::scalar::{AlphaParam, Exact, Numeric, QBase, ScalarError};

#[derive(Debug, Error)]
pub enum KernelError {
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("invalid alpha: {0}")]
    Alpha(String),
    #[error("index out of range: {0}")]
    Index(String),
    #[error("{0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = KernelError> = std::result::Result<T, E>;

/// Concurrent memo table. Two threads may compute the same entry; both results are
/// equal and the later insert wins.
pub(crate) struct Memo<K, V> {
    map: RwLock<HashMap<K, V>>,
}

impl<K: Eq + Hash + Clone, V: Clone> Memo<K, V> {
    pub(crate) fn new() -> Self {
        Memo {
            map: RwLock::new(HashMap::new()),
        }
    }

    pub(crate) fn get_or_try<E>(&self, key: &K, f: impl FnOnce() -> Result<V, E>) -> Result<V, E> {
        if let Some(v) = self.map.read().get(key) {
            return Ok(v.clone());
        }
        let v = f()?;
        self.map.write().insert(key.clone(), v.clone());
        Ok(v)
    }

    pub(crate) fn len(&self) -> usize {
        self.map.read().len()
    }
}

/// Which pair of generators plays the role of `z, z*`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DiskCopy {
    Z,
    X2,
    Y2,
}

pub(crate) type Row<C> = Arc<std::collections::BTreeMap<(u32, u32), C>>;
type RowKey = (u32, u32, u32, u32, AlphaParam);

/// The algebras `Z`, `X`, `Y` over one coefficient backend, plus caches for the
/// q-disk polynomials and linearization rows.
pub struct Kernel<B: QBase> {
    pub(crate) base: B,
    pub(crate) z: Arc<Algebra<B::C>>,
    pub(crate) x: Arc<Algebra<B::C>>,
    pub(crate) y: Arc<Algebra<B::C>>,
    pub(crate) disk: Memo<(DiskCopy, u32, u32, AlphaParam), NcElement<B::C>>,
    pub(crate) disk3: Memo<(u32, u32, AlphaParam), NcElement<B::C>>,
    pub(crate) h_values: Memo<(u32, AlphaParam), B::C>,
    pub(crate) rows: Memo<RowKey, Row<B::C>>,
}

impl<B: QBase> std::fmt::Debug for Kernel<B> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Kernel").field("base", &self.base).finish()
    }
}

impl Kernel<Exact> {
    pub fn exact() -> Self {
        Kernel::new(Exact).expect("built-in presentations are valid")
    }
}

impl Kernel<Numeric> {
    pub fn numeric(q: f64) -> Result<Self> {
        Kernel::new(Numeric::new(q)?)
    }
}

impl<B: QBase> Kernel<B> {
    pub fn new(base: B) -> Result<Self> {
        let kernel = Kernel {
            z: presets::disk_algebra(&base)?,
            x: presets::x_algebra(&base)?,
            y: presets::y_algebra(&base)?,
            base,
            disk: Memo::new(),
            disk3: Memo::new(),
            h_values: Memo::new(),
            rows: Memo::new(),
        };
        kernel.check_c_central()?;
        Ok(kernel)
    }

    /// `C = 1 - X2 X2*` commutes with `X1` and `X1*`, which the expansion of the
    /// three-variable polynomials relies on.
    fn check_c_central(&self) -> Result<()> {
        let c = self.c_element();
        for name in ["X1", "X1s"] {
            let g = NcElement::generator(&self.x, name)?;
            if !c.mul(&g).close_to(&g.mul(&c)) {
                return Err(KernelError::Algebra(AlgebraError::Invalid(format!(
                    "1 - X2 X2s does not commute with {name}"
                ))));
            }
        }
        Ok(())
    }

    pub fn base(&self) -> &B {
        &self.base
    }

    pub fn disk_algebra(&self) -> &Arc<Algebra<B::C>> {
        &self.z
    }

    pub fn x_algebra(&self) -> &Arc<Algebra<B::C>> {
        &self.x
    }

    pub fn y_algebra(&self) -> &Arc<Algebra<B::C>> {
        &self.y
    }

    /// Rejects parameters the backend cannot represent (non-integer alpha in exact
    /// mode) and alpha <= -1.
    pub fn check_alpha(&self, alpha: AlphaParam) -> Result<()> {
        self.base.check_alpha(alpha)?;
        if alpha.value() <= -1.0 {
            return Err(KernelError::Alpha(format!("alpha must be > -1, got {alpha}")));
        }
        Ok(())
    }

    /// For operations involving `alpha - 1`: integer alpha >= 1 in exact mode,
    /// alpha > 0 otherwise.
    pub fn check_alpha_shifted(&self, alpha: AlphaParam) -> Result<()> {
        self.check_alpha(alpha)?;
        let ok = match alpha {
            AlphaParam::Exact(a) => a >= 1,
            AlphaParam::Float(x) => x > 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(KernelError::Alpha(format!(
                "alpha - 1 must be a valid parameter, got alpha = {alpha}"
            )))
        }
    }

    /// `1 - X2 X2*` in `X`.
    pub fn c_element(&self) -> NcElement<B::C> {
        let x2 = NcElement::generator(&self.x, "X2").expect("preset generator");
        let x2s = NcElement::generator(&self.x, "X2s").expect("preset generator");
        NcElement::one(&self.x).sub(&x2.mul(&x2s))
    }

    /// Number of cached linearization rows.
    pub fn cached_rows(&self) -> usize {
        self.rows.len()
    }
}
