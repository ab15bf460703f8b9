//! The three density curves of the order-density plot and the reference
//! points read off it.
//!
//! A reference point `(u, v)` is a plot coordinate; it stands for
//! `x = 2^(6u)` and density `v / 20`, as fixed by the axis ticks.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::arith::{sieve_primes_with, SieveConfig};
use crate::closure::{density, rule_closure_of, ClosureRules, DensityMode, OrderSet};
use crate::constructions::{family_orders_into, FamilyId, GeneratorFamily, KnownOrdersTable, PaleyPolicy};
use crate::error::{Error, Result};

/// Plot units per doubling of `x`, inverted.
pub const X_SCALE: f64 = 6.0;
/// Plot units per unit of density, inverted.
pub const DENSITY_SCALE: f64 = 20.0;

/// Sample points within this distance in `log2 x` of a reference point are
/// compared against it.
const MATCH_TOLERANCE: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CurveId {
    /// Paley orders alone.
    Paley,
    /// Product-rule closure of the Paley orders.
    Products,
    /// Closure of the Paley orders together with every other family.
    ProductsPlusOthers,
}

impl CurveId {
    pub const ALL: [CurveId; 3] = [CurveId::Paley, CurveId::Products, CurveId::ProductsPlusOthers];

    pub fn name(self) -> &'static str {
        match self {
            CurveId::Paley => "paley",
            CurveId::Products => "products",
            CurveId::ProductsPlusOthers => "products_plus_others",
        }
    }

    /// Plot colour.
    pub fn color(self) -> &'static str {
        match self {
            CurveId::Paley => "red",
            CurveId::Products => "blue",
            CurveId::ProductsPlusOthers => "black",
        }
    }
}

impl fmt::Display for CurveId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CurveId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        CurveId::ALL
            .into_iter()
            .find(|c| c.name() == s || c.color() == s)
            .ok_or_else(|| Error::domain(format!("unknown curve '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferencePoint {
    pub u: f64,
    pub v: f64,
}

impl ReferencePoint {
    pub fn log2_x(&self) -> f64 {
        X_SCALE * self.u
    }

    /// Nearest integer to `2^(6u)`.
    pub fn x(&self) -> u64 {
        self.log2_x().exp2().round() as u64
    }

    pub fn density(&self) -> f64 {
        self.v / DENSITY_SCALE
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigureReference {
    pub curve: CurveId,
    pub points: Vec<ReferencePoint>,
}

impl FigureReference {
    pub fn for_curve(curve: CurveId) -> Self {
        let raw: &[(f64, f64)] = match curve {
            CurveId::Paley => &PALEY_POINTS,
            CurveId::Products => &PRODUCTS_POINTS,
            CurveId::ProductsPlusOthers => &PRODUCTS_PLUS_OTHERS_POINTS,
        };
        FigureReference {
            curve,
            points: raw.iter().map(|&(u, v)| ReferencePoint { u, v }).collect(),
        }
    }

    /// Reference point at `log2 x`, if there is one.
    pub fn at_log2(&self, log2_x: f64) -> Option<&ReferencePoint> {
        self.points
            .iter()
            .find(|p| (p.log2_x() - log2_x).abs() < MATCH_TOLERANCE)
    }

    pub fn at_x(&self, x: u64) -> Option<&ReferencePoint> {
        if x == 0 {
            return None;
        }
        self.at_log2((x as f64).log2())
    }
}

/// Inputs for computing the three curves.
#[derive(Debug, Clone)]
pub struct FigureConfig {
    pub limit: u64,
    pub paley_policy: PaleyPolicy,
    pub table: Option<Arc<KnownOrdersTable>>,
    pub sieve: SieveConfig,
}

impl FigureConfig {
    pub fn new(limit: u64) -> Self {
        FigureConfig {
            limit,
            paley_policy: PaleyPolicy::Pure,
            table: None,
            sieve: SieveConfig::default(),
        }
    }
}

/// The three order sets behind the curves. Each is a superset of the previous.
#[derive(Debug, Clone)]
pub struct FigureCurves {
    pub paley: OrderSet,
    pub products: OrderSet,
    pub products_plus_others: OrderSet,
}

impl FigureCurves {
    pub fn get(&self, curve: CurveId) -> &OrderSet {
        match curve {
            CurveId::Paley => &self.paley,
            CurveId::Products => &self.products,
            CurveId::ProductsPlusOthers => &self.products_plus_others,
        }
    }
}

/// Order sets of the curves listed in `which` up to `config.limit`; the
/// others are left empty. The black curve uses every family plus the table.
pub fn compute_curves(config: &FigureConfig, which: &[CurveId]) -> Result<FigureCurves> {
    let limit = config.limit;
    let budget = config.sieve.budget;
    let primes = sieve_primes_with(limit.max(2), &config.sieve)?;
    let paley_id = match config.paley_policy {
        PaleyPolicy::Pure => FamilyId::PaleyPure,
        PaleyPolicy::AllTwoPowers => FamilyId::PaleyDoubled,
    };
    let mut paley = OrderSet::with_budget(limit, budget)?;
    family_orders_into(&GeneratorFamily::new(paley_id), limit, Some(&primes), &mut paley)?;

    let empty = || OrderSet::with_budget(0, budget);
    let products = if which.contains(&CurveId::Products) {
        rule_closure_of(&paley, ClosureRules::ALL, budget)?
    } else {
        empty()?
    };
    let products_plus_others = if which.contains(&CurveId::ProductsPlusOthers) {
        let mut gens = paley.clone();
        for id in [
            FamilyId::SmallOrders,
            FamilyId::SeberryExponent,
            FamilyId::BinaryDigits,
            FamilyId::FourQSquared,
            FamilyId::FourQFourth,
            FamilyId::TwinPrimePowerSquare,
            FamilyId::Cocyclic,
        ] {
            let family = GeneratorFamily {
                id,
                table: config.table.clone(),
            };
            family_orders_into(&family, limit, Some(&primes), &mut gens)?;
        }
        rule_closure_of(&gens, ClosureRules::ALL, budget)?
    } else {
        empty()?
    };
    drop(primes);
    let paley = if which.contains(&CurveId::Paley) {
        paley
    } else {
        empty()?
    };
    Ok(FigureCurves {
        paley,
        products,
        products_plus_others,
    })
}

/// One sample of the figure: densities and, where the plot has a point at
/// this `x`, the reference density.
#[derive(Debug, Clone, PartialEq)]
pub struct FigureRow {
    pub x: u64,
    pub log2_x: f64,
    pub densities: Vec<(CurveId, f64)>,
    pub references: Vec<(CurveId, Option<f64>)>,
}

impl FigureRow {
    pub fn density(&self, curve: CurveId) -> Option<f64> {
        self.densities.iter().find(|(c, _)| *c == curve).map(|&(_, d)| d)
    }

    pub fn reference(&self, curve: CurveId) -> Option<f64> {
        self.references
            .iter()
            .find(|(c, _)| *c == curve)
            .and_then(|&(_, d)| d)
    }

    pub fn delta(&self, curve: CurveId) -> Option<f64> {
        Some(self.density(curve)? - self.reference(curve)?)
    }
}

/// Densities of `curves` at each `x`.
pub fn figure_rows(
    sets: &FigureCurves,
    curves: &[CurveId],
    xs: &[u64],
    mode: DensityMode,
) -> Result<Vec<FigureRow>> {
    let refs: Vec<FigureReference> = curves.iter().map(|&c| FigureReference::for_curve(c)).collect();
    xs.iter()
        .map(|&x| {
            let densities = curves
                .iter()
                .map(|&c| Ok((c, density(sets.get(c), x, mode)?)))
                .collect::<Result<Vec<_>>>()?;
            let references = refs
                .iter()
                .map(|r| (r.curve, r.at_x(x).map(ReferencePoint::density)))
                .collect();
            Ok(FigureRow {
                x,
                log2_x: (x as f64).log2(),
                densities,
                references,
            })
        })
        .collect()
}

/// `x = round(2^s)` for each `log2 x` sample `s`.
pub fn samples_to_x(log2_samples: &[f64]) -> Result<Vec<u64>> {
    log2_samples
        .iter()
        .map(|&s| {
            if !(0.0..=40.0).contains(&s) {
                return Err(Error::domain(format!("sample log2 x = {s} is out of range")));
            }
            Ok(s.exp2().round() as u64)
        })
        .collect()
}

const PALEY_POINTS: [(f64, f64); 82] = [
    (0.333333, 5.000000),
    (0.500000, 5.000000),
    (0.597494, 5.000000),
    (0.666667, 3.750000),
    (0.720321, 4.000000),
    (0.764161, 4.166000),
    (0.801226, 4.286000),
    (0.833333, 4.376000),
    (0.861654, 4.444000),
    (0.886988, 4.000000),
    (0.909905, 4.090000),
    (0.930827, 4.166000),
    (0.967893, 3.572000),
    (0.984482, 3.666000),
    (1.000000, 3.438000),
    (1.014577, 3.530000),
    (1.028321, 3.612000),
    (1.041321, 3.684000),
    (1.053655, 3.750000),
    (1.065386, 3.810000),
    (1.076572, 3.636000),
    (1.097494, 3.334000),
    (1.107309, 3.200000),
    (1.166667, 3.124000),
    (1.174066, 3.182000),
    (1.181244, 3.088000),
    (1.188214, 3.142000),
    (1.194988, 3.056000),
    (1.201575, 3.108000),
    (1.207988, 3.158000),
    (1.220321, 3.000000),
    (1.226254, 3.048000),
    (1.232053, 3.096000),
    (1.243239, 2.954000),
    (1.248642, 3.000000),
    (1.264161, 2.916000),
    (1.269118, 2.960000),
    (1.273976, 2.900000),
    (1.278737, 3.040000),
    (1.283407, 2.980000),
    (1.287987, 3.018000),
    (1.292481, 2.962000),
    (1.296893, 3.000000),
    (1.301226, 3.036000),
    (1.305482, 3.070000),
    (1.317815, 3.000000),
    (1.325699, 2.904000),
    (1.329547, 2.936000),
    (1.333333, 2.890000),
    (1.340732, 2.878000),
    (1.347911, 2.868000),
    (1.351421, 2.898000),
    (1.354880, 2.858000),
    (1.358291, 2.888000),
    (1.361654, 2.848000),
    (1.368242, 2.770000),
    (1.371470, 2.734000),
    (1.500000, 2.618000),
    (1.666667, 2.382000),
    (1.833333, 2.188000),
    (2.000000, 1.992000),
    (2.166667, 1.826000),
    (2.333333, 1.696000),
    (2.500000, 1.566000),
    (2.666667, 1.462000),
    (2.833333, 1.372000),
    (3.000000, 1.290000),
    (3.166667, 1.218000),
    (3.333333, 1.154000),
    (3.500000, 1.094000),
    (3.666667, 1.042000),
    (3.833333, 0.994000),
    (4.000000, 0.950000),
    (4.166667, 0.910000),
    (4.333333, 0.874000),
    (4.500000, 0.840000),
    (4.666667, 0.808000),
    (4.833333, 0.778000),
    (5.000000, 0.752000),
    (5.166667, 0.726000),
    (5.333333, 0.702000),
    (5.500000, 0.680000),
];

const PRODUCTS_POINTS: [(f64, f64); 32] = [
    (0.333333, 5.000000),
    (0.500000, 5.000000),
    (0.666667, 5.000000),
    (0.833333, 5.000000),
    (1.000000, 4.688000),
    (1.166667, 4.376000),
    (1.333333, 4.140000),
    (1.500000, 3.906000),
    (1.666667, 3.730000),
    (1.833333, 3.536000),
    (2.000000, 3.360000),
    (2.166667, 3.220000),
    (2.333333, 3.080000),
    (2.500000, 2.966000),
    (2.666667, 2.860000),
    (2.833333, 2.764000),
    (3.000000, 2.674000),
    (3.166667, 2.592000),
    (3.333333, 2.516000),
    (3.500000, 2.448000),
    (3.666667, 2.386000),
    (3.833333, 2.328000),
    (4.000000, 2.272000),
    (4.166667, 2.222000),
    (4.333333, 2.174000),
    (4.500000, 2.130000),
    (4.666667, 2.088000),
    (4.833333, 2.048000),
    (5.000000, 2.010000),
    (5.166667, 1.976000),
    (5.333333, 1.942000),
    (5.500000, 1.910000),
];

const PRODUCTS_PLUS_OTHERS_POINTS: [(f64, f64); 32] = [
    (0.333333, 5.000000),
    (0.500000, 5.000000),
    (0.666667, 5.000000),
    (0.833333, 5.000000),
    (1.000000, 5.000000),
    (1.166667, 5.000000),
    (1.333333, 5.000000),
    (1.500000, 5.000000),
    (1.666667, 4.902000),
    (1.833333, 4.854000),
    (2.000000, 4.268000),
    (2.166667, 3.836000),
    (2.333333, 3.526000),
    (2.500000, 3.296000),
    (2.666667, 3.132000),
    (2.833333, 3.008000),
    (3.000000, 2.894000),
    (3.166667, 2.792000),
    (3.333333, 2.698000),
    (3.500000, 2.614000),
    (3.666667, 2.536000),
    (3.833333, 2.468000),
    (4.000000, 2.406000),
    (4.166667, 2.350000),
    (4.333333, 2.296000),
    (4.500000, 2.268000),
    (4.666667, 2.202000),
    (4.833333, 2.158000),
    (5.000000, 2.118000),
    (5.166667, 2.080000),
    (5.333333, 2.044000),
    (5.500000, 2.010000),
];
