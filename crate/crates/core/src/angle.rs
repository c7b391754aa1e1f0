//! Angles on the circle.
//!
//! Two representations coexist. [`Turns`] is an exact rational fraction of a
//! full turn and carries everything that comes from torsion factors or from
//! root-of-unity targets. Free (torus) contributions are plain `f64` radians.

use std::cmp::Ordering;
use std::f64::consts::{PI, TAU};
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance used when exact and floating angle parts are mixed.
pub const ANGLE_TOL: f64 = 1e-12;

/// Reduces an angle to `[0, 2π)`.
pub fn reduce_angle(a: f64) -> f64 {
    let r = a.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Circle distance `min_k |a - b + 2πk|`, in `[0, π]`.
pub fn angular_distance(a: f64, b: f64) -> f64 {
    let d = reduce_angle(a - b);
    d.min(TAU - d)
}

/// `|1 - e^{id}| = 2 sin(d/2)` for an angular distance `d ∈ [0, π]`.
pub fn chordal_of_angle(d: f64) -> Result<f64> {
    if !(d >= -ANGLE_TOL && d <= PI + ANGLE_TOL) {
        return Err(Error::AngleOutOfRange(d));
    }
    Ok(2.0 * (d.clamp(0.0, PI) / 2.0).sin())
}

/// Inverse of [`chordal_of_angle`]: the angular distance whose chord is `c ∈ [0, 2]`.
pub fn angle_of_chord(c: f64) -> Result<f64> {
    if !(c >= -ANGLE_TOL && c <= 2.0 + ANGLE_TOL) {
        return Err(Error::InvalidInput(format!("chord {c} outside [0, 2]")));
    }
    Ok(2.0 * (c.clamp(0.0, 2.0) / 2.0).asin())
}

/// Exact point on the circle: `num/den` of a full turn, reduced, `0 <= num < den`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Turns {
    num: u64,
    den: u64,
}

impl Turns {
    pub const ZERO: Turns = Turns { num: 0, den: 1 };
    pub const HALF: Turns = Turns { num: 1, den: 2 };

    /// `num/den` turns reduced modulo one. Panics if `den == 0` or if the
    /// reduced denominator does not fit in a `u64`.
    pub fn new(num: i128, den: i128) -> Turns {
        Self::checked(num, den).expect("turn fraction out of range")
    }

    pub fn checked(num: i128, den: i128) -> Option<Turns> {
        if den == 0 {
            return None;
        }
        let (num, den) = if den < 0 { (-num, -den) } else { (num, den) };
        let num = num.rem_euclid(den);
        let g = num.gcd(&den);
        let (num, den) = (num / g, den / g);
        Some(Turns {
            num: u64::try_from(num).ok()?,
            den: u64::try_from(den).ok()?,
        })
    }

    /// The grid point `2πj/n`.
    pub fn root(j: u64, n: u64) -> Turns {
        Turns::new(j as i128, n as i128)
    }

    pub fn num(self) -> u64 {
        self.num
    }

    pub fn den(self) -> u64 {
        self.den
    }

    pub fn is_zero(self) -> bool {
        self.num == 0
    }

    pub fn to_radians(self) -> f64 {
        TAU * self.num as f64 / self.den as f64
    }

    pub fn checked_add(self, rhs: Turns) -> Option<Turns> {
        let g = self.den.gcd(&rhs.den) as i128;
        let (a, b) = (self.den as i128 / g, rhs.den as i128 / g);
        let num = (self.num as i128).checked_mul(b)? + (rhs.num as i128).checked_mul(a)?;
        Turns::checked(num, a.checked_mul(rhs.den as i128)?)
    }

    pub fn checked_sub(self, rhs: Turns) -> Option<Turns> {
        self.checked_add(-rhs)
    }

    /// `k` times this point.
    pub fn checked_scale(self, k: i64) -> Option<Turns> {
        Turns::checked((self.num as i128).checked_mul(k as i128)?, self.den as i128)
    }

    /// Exact circle distance in turns, in `[0, 1/2]`.
    pub fn distance(self, other: Turns) -> Option<Turns> {
        let d = self.checked_sub(other)?;
        if 2 * d.num as u128 > d.den as u128 {
            Some(Turns { num: d.den - d.num, den: d.den })
        } else {
            Some(d)
        }
    }
}

impl std::ops::Neg for Turns {
    type Output = Turns;
    fn neg(self) -> Turns {
        if self.num == 0 {
            self
        } else {
            Turns { num: self.den - self.num, den: self.den }
        }
    }
}

impl Ord for Turns {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

impl PartialOrd for Turns {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Turns {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{} turn", self.num, self.den)
    }
}

impl fmt::Display for Turns {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// An angle that is either known exactly or only as radians.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Angle {
    Exact(Turns),
    Radians(f64),
}

impl Angle {
    pub fn radians(self) -> f64 {
        match self {
            Angle::Exact(t) => t.to_radians(),
            Angle::Radians(r) => reduce_angle(r),
        }
    }

    pub fn exact(self) -> Option<Turns> {
        match self {
            Angle::Exact(t) => Some(t),
            Angle::Radians(_) => None,
        }
    }

    pub fn neg(self) -> Angle {
        match self {
            Angle::Exact(t) => Angle::Exact(-t),
            Angle::Radians(r) => Angle::Radians(reduce_angle(-r)),
        }
    }

    /// Subtracts an exact part, staying exact when possible.
    pub fn minus_turns(self, t: Turns) -> Angle {
        match self {
            Angle::Exact(a) => match a.checked_sub(t) {
                Some(d) => Angle::Exact(d),
                None => Angle::Radians(reduce_angle(a.to_radians() - t.to_radians())),
            },
            Angle::Radians(r) => Angle::Radians(reduce_angle(r - t.to_radians())),
        }
    }

    /// Adds a phase, staying exact when the phase has no free part.
    pub fn plus_phase(self, p: Phase) -> Angle {
        match (self, p.free == 0.0) {
            (Angle::Exact(a), true) => match a.checked_add(p.exact) {
                Some(s) => Angle::Exact(s),
                None => Angle::Radians(reduce_angle(a.to_radians() + p.exact.to_radians())),
            },
            _ => Angle::Radians(reduce_angle(self.radians() + p.radians())),
        }
    }
}

/// The value `arg γ(x)` split into an exact torsion part and a free part.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Phase {
    pub exact: Turns,
    /// Radians contributed by torus coordinates; not reduced.
    pub free: f64,
}

impl Phase {
    pub fn radians(self) -> f64 {
        reduce_angle(self.exact.to_radians() + self.free)
    }

    /// Circle distance from `target`, exact when both sides are.
    pub fn distance_to(self, target: Angle) -> f64 {
        match self.exact_distance_to(target) {
            Some(t) => t.to_radians(),
            None => match target {
                Angle::Exact(t) => match t.checked_sub(self.exact) {
                    Some(r) => angular_distance(r.to_radians(), self.free),
                    None => angular_distance(target.radians(), self.radians()),
                },
                Angle::Radians(_) => angular_distance(target.radians(), self.radians()),
            },
        }
    }

    pub fn exact_distance_to(self, target: Angle) -> Option<Turns> {
        match target {
            Angle::Exact(t) if self.free == 0.0 => t.distance(self.exact),
            _ => None,
        }
    }
}
