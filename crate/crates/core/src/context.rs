use std::fmt;
use std::sync::Arc;

use once_cell::sync::OnceCell;

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::groebner::{buchberger, GbLimits, GroebnerBasis};
use crate::monomial::MonomialOrder;
use crate::poly::{PolyRing, Polynomial};

/// Most variables a context may have; elimination adds a few more and
/// support masks are 64-bit.
pub const MAX_VARS: usize = 48;

/// The ring `R = k[vars]/Q`, always read as localized at the origin.
pub struct RingContext {
    var_names: Vec<String>,
    field: PrimeField,
    relations: Vec<Polynomial>,
    limits: GbLimits,
    relations_gb: OnceCell<GroebnerBasis>,
    dim: OnceCell<i64>,
}

impl fmt::Debug for RingContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RingContext")
            .field("vars", &self.var_names)
            .field("char", &self.field.characteristic())
            .field("relations", &self.relations)
            .finish()
    }
}

impl PartialEq for RingContext {
    fn eq(&self, other: &Self) -> bool {
        self.var_names == other.var_names
            && self.field == other.field
            && self.relations == other.relations
    }
}

impl RingContext {
    pub fn new(
        var_names: Vec<String>,
        characteristic: u64,
        relations: Vec<Polynomial>,
    ) -> Result<Arc<Self>> {
        Self::with_limits(var_names, characteristic, relations, GbLimits::default())
    }

    pub fn with_limits(
        var_names: Vec<String>,
        characteristic: u64,
        relations: Vec<Polynomial>,
        limits: GbLimits,
    ) -> Result<Arc<Self>> {
        let field = PrimeField::new(characteristic)?;
        let n = var_names.len();
        if n == 0 || n > MAX_VARS {
            return Err(Error::InvalidRing(format!(
                "need between 1 and {MAX_VARS} variables, got {n}"
            )));
        }
        for (i, v) in var_names.iter().enumerate() {
            if var_names[..i].contains(v) {
                return Err(Error::InvalidRing(format!("duplicate variable {v}")));
            }
        }
        let ring = PolyRing::new(field, n, MonomialOrder::GrevLex);
        let mut rels = Vec::new();
        for r in relations {
            if r.nvars() != n {
                return Err(Error::ContextMismatch(format!(
                    "relation in {} variables for a ring with {n}",
                    r.nvars()
                )));
            }
            if r.constant_term() != 0 {
                return Err(Error::InvalidRing(
                    "relations must vanish at the origin".into(),
                ));
            }
            let r = ring.convert(&r);
            if !r.is_zero() {
                rels.push(r);
            }
        }
        Ok(Arc::new(RingContext {
            var_names,
            field,
            relations: rels,
            limits,
            relations_gb: OnceCell::new(),
            dim: OnceCell::new(),
        }))
    }

    /// The polynomial ring `F_p[x_1..x_n]` with no relations.
    pub fn polynomial_ring(names: &[&str], characteristic: u64) -> Result<Arc<Self>> {
        Self::new(
            names.iter().map(|s| s.to_string()).collect(),
            characteristic,
            vec![],
        )
    }

    pub fn var_names(&self) -> &[String] {
        &self.var_names
    }

    pub fn nvars(&self) -> usize {
        self.var_names.len()
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn characteristic(&self) -> u32 {
        self.field.characteristic()
    }

    pub fn relations(&self) -> &[Polynomial] {
        &self.relations
    }

    pub fn limits(&self) -> GbLimits {
        self.limits
    }

    /// Ambient polynomial ring under grevlex.
    pub fn ring(&self) -> PolyRing {
        PolyRing::new(self.field, self.nvars(), MonomialOrder::GrevLex)
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.var_names.iter().position(|v| v == name)
    }

    pub fn relations_gb(&self) -> Result<&GroebnerBasis> {
        self.relations_gb
            .get_or_try_init(|| buchberger(&self.ring(), &self.relations, self.limits, None))
    }

    /// Krull dimension `d` of `R`. The relations vanish at the origin, so the
    /// global dimension of `k[vars]/Q` is used for the local one.
    pub fn dim(&self) -> Result<i64> {
        self.dim
            .get_or_try_init(|| Ok(self.relations_gb()?.krull_dimension()))
            .copied()
    }

    pub fn format_poly(&self, f: &Polynomial) -> String {
        if f.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (m, c)) in f.terms().iter().enumerate() {
            let c = self.field.to_signed(*c);
            let sign = if c < 0 { "-" } else { "+" };
            if k == 0 {
                if c < 0 {
                    out.push('-');
                }
            } else {
                out.push_str(sign);
            }
            let mut factors: Vec<String> = Vec::new();
            if c.abs() != 1 || m.is_one() {
                factors.push(c.abs().to_string());
            }
            for (v, &e) in m.exponents().iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.var_names[v].clone()),
                    _ => factors.push(format!("{}^{}", self.var_names[v], e)),
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }
}
