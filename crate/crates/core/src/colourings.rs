//! Cut colourings `χ_X`: a triple is blue (colour 1) when it meets both `X`
//! and its complement, red (colour 0) otherwise.
//!
//! Each mixed pair `{u, v}` (one end in `X`) lies in exactly one block of any
//! STS and a blue block holds exactly two mixed pairs, so every labelled STS
//! has exactly `x(n − x)/2` blue blocks. The colouring's discrepancy is
//! therefore `|x(n − x)/2 − n(n − 1)/12|` whatever the system.

use std::fmt;

use crate::error::{Error, Result};
use crate::types::{unrank_triple, Colouring, Order, ScaledDiscrepancy, SteinerSystem};

/// An exact non-negative rational with denominator 12.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Twelfths(pub u64);

impl Twelfths {
    pub fn as_f64(self) -> f64 {
        self.0 as f64 / 12.0
    }

    /// Converts to a discrepancy over two colours; only exact when the
    /// numerator is a multiple of 6.
    pub fn to_scaled(self) -> Result<ScaledDiscrepancy> {
        if !self.0.is_multiple_of(6) {
            return Err(Error::Domain(format!("{}/12 is not a half-integer", self.0)));
        }
        Ok(ScaledDiscrepancy::new(self.0 / 6, 2))
    }
}

impl fmt::Display for Twelfths {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_multiple_of(6) {
            write!(f, "{:.1}", self.as_f64())
        } else {
            write!(f, "{:.2}", self.as_f64())
        }
    }
}

fn membership(order: Order, cut: &[u32]) -> Result<Vec<bool>> {
    let mut inside = vec![false; order.n() as usize];
    for &v in cut {
        *inside.get_mut(v as usize).ok_or(Error::InvalidSubset {
            vertex: v,
            order: order.n(),
        })? = true;
    }
    Ok(inside)
}

/// The 2-colouring of the full triple universe induced by the cut `X`.
pub fn build_cut_colouring(order: Order, cut: &[u32]) -> Result<Colouring> {
    let inside = membership(order, cut)?;
    let colours = (0..order.triples())
        .map(|rank| {
            let t = unrank_triple(rank, order).expect("rank in range");
            let hits = t.vertices().iter().filter(|&&v| inside[v as usize]).count();
            u8::from((1..=2).contains(&hits))
        })
        .collect();
    Colouring::new(order, 2, colours)
}

/// Cut colouring with `X = {0, …, x − 1}`.
pub fn cut_colouring_of_size(order: Order, x: u32) -> Result<Colouring> {
    if x > order.n() {
        return Err(Error::Domain(format!("cut size {x} exceeds n = {order}")));
    }
    build_cut_colouring(order, &(0..x).collect::<Vec<_>>())
}

/// `|x(n − x)/2 − n(n − 1)/12|`, exactly.
pub fn closed_form_disc(order: Order, x: u32) -> Result<Twelfths> {
    let n = order.n() as i64;
    let x = x as i64;
    if x > n {
        return Err(Error::Domain(format!("cut size {x} outside [0, {n}]")));
    }
    Ok(Twelfths((6 * x * (n - x) - n * (n - 1)).unsigned_abs()))
}

/// Minimum of [`closed_form_disc`] over every cut size, with all minimisers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Delta2Formula {
    pub order: Order,
    pub value: Twelfths,
    /// Every minimising cut size, ascending.
    pub argmins: Vec<u32>,
}

pub fn conjectured_delta2(order: Order) -> Delta2Formula {
    let values: Vec<(u32, Twelfths)> = (0..=order.n())
        .map(|x| (x, closed_form_disc(order, x).expect("x in range")))
        .collect();
    let value = values.iter().map(|&(_, v)| v).min().expect("n >= 3");
    let argmins = values.iter().filter(|&&(_, v)| v == value).map(|&(x, _)| x).collect();
    Delta2Formula { order, value, argmins }
}

/// Number of blocks of `system` that are blue under the cut `X`.
pub fn blue_count(system: &SteinerSystem, cut: &[u32]) -> Result<usize> {
    let inside = membership(system.order(), cut)?;
    Ok(system
        .triples()
        .filter(|t| {
            let hits = t.vertices().iter().filter(|&&v| inside[v as usize]).count();
            (1..=2).contains(&hits)
        })
        .count())
}

/// Whether the blue blocks of `system` number exactly `x(n − x)/2`.
pub fn verify_blue_count_identity(system: &SteinerSystem, cut: &[u32]) -> Result<bool> {
    let inside = membership(system.order(), cut)?;
    let x = inside.iter().filter(|&&b| b).count();
    let n = system.order().n() as usize;
    let twice_expected = x * (n - x);
    Ok(twice_expected.is_multiple_of(2) && blue_count(system, cut)? == twice_expected / 2)
}
