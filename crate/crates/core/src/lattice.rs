//! Entrywise order on monotone triangles, r-ary meet and join, and the
//! trivial-meet / trivial-join predicates.

use crate::error::{Error, Result};
use crate::triangle::{extremal_triangle, Extreme, MonotoneTriangle};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OrderRelation {
    Less,
    Equal,
    Greater,
    Incomparable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LatticeOp {
    Meet,
    Join,
}

fn same_size(a: &MonotoneTriangle, b: &MonotoneTriangle) -> Result<()> {
    if a.n() != b.n() {
        return Err(Error::SizeMismatch {
            left: a.n(),
            right: b.n(),
        });
    }
    Ok(())
}

pub fn compare(a: &MonotoneTriangle, b: &MonotoneTriangle) -> Result<OrderRelation> {
    same_size(a, b)?;
    let (mut below, mut above) = (false, false);
    for (&x, &y) in a.entries().iter().zip(b.entries()) {
        below |= x < y;
        above |= x > y;
    }
    Ok(match (below, above) {
        (false, false) => OrderRelation::Equal,
        (true, false) => OrderRelation::Less,
        (false, true) => OrderRelation::Greater,
        (true, true) => OrderRelation::Incomparable,
    })
}

/// `a <= b` entrywise.
pub fn le(a: &MonotoneTriangle, b: &MonotoneTriangle) -> Result<bool> {
    Ok(matches!(
        compare(a, b)?,
        OrderRelation::Less | OrderRelation::Equal
    ))
}

fn fold(ts: &[MonotoneTriangle], op: LatticeOp) -> Result<MonotoneTriangle> {
    let (first, rest) = ts.split_first().ok_or(Error::EmptyInput)?;
    let pick = match op {
        LatticeOp::Meet => std::cmp::min::<u8>,
        LatticeOp::Join => std::cmp::max::<u8>,
    };
    let mut acc = first.entries().to_vec();
    for t in rest {
        same_size(first, t)?;
        for (x, &y) in acc.iter_mut().zip(t.entries()) {
            *x = pick(*x, y);
        }
    }
    MonotoneTriangle::from_flat(first.n(), &acc)
}

/// Entrywise minimum of one or more triangles.
pub fn meet(ts: &[MonotoneTriangle]) -> Result<MonotoneTriangle> {
    fold(ts, LatticeOp::Meet)
}

/// Entrywise maximum of one or more triangles.
pub fn join(ts: &[MonotoneTriangle]) -> Result<MonotoneTriangle> {
    fold(ts, LatticeOp::Join)
}

pub fn meet2(a: &MonotoneTriangle, b: &MonotoneTriangle) -> Result<MonotoneTriangle> {
    same_size(a, b)?;
    MonotoneTriangle::from_flat(a.n(), &a.zip_entries(b, std::cmp::min))
}

pub fn join2(a: &MonotoneTriangle, b: &MonotoneTriangle) -> Result<MonotoneTriangle> {
    same_size(a, b)?;
    MonotoneTriangle::from_flat(a.n(), &a.zip_entries(b, std::cmp::max))
}

/// Meet mode: the meet is `tau_min`. Join mode: the join is `tau_max`.
pub fn is_trivial(ts: &[MonotoneTriangle], op: LatticeOp) -> Result<bool> {
    let combined = fold(ts, op)?;
    let target = match op {
        LatticeOp::Meet => Extreme::Min,
        LatticeOp::Join => Extreme::Max,
    };
    Ok(combined == extremal_triangle(combined.n(), target)?)
}
