//! Piecewise-linear braid action on Dynnikov coordinates of the four-punctured
//! disk. The boundary plays the role of the fifth puncture, so laminations of
//! the disk are laminations of the five-punctured sphere.
//!
//! Coordinates are stored as `[a1, a2, b1, b2]`. Everything here is generic
//! over the integer type so the search code can run on machine integers.

use std::ops::{Add, Neg, Sub};

use num_traits::Signed;

pub trait Coord: Clone + Ord + Signed {}
impl<T: Clone + Ord + Signed> Coord for T {}

/// What the half-twist formulas need: additive structure plus the positive
/// and negative parts.
pub trait Pl: Clone + Add<Output = Self> + Sub<Output = Self> + Neg<Output = Self> {
    fn pos(self) -> Self;
    fn neg_part(self) -> Self;
}

impl<T: Coord> Pl for T {
    #[inline]
    fn pos(self) -> Self {
        if self.is_positive() {
            self
        } else {
            T::zero()
        }
    }

    #[inline]
    fn neg_part(self) -> Self {
        if self.is_negative() {
            self
        } else {
            T::zero()
        }
    }
}

pub type Dyn<T> = [T; 4];

#[inline]
fn pos<T: Pl>(x: T) -> T {
    x.pos()
}

#[inline]
fn neg<T: Pl>(x: T) -> T {
    x.neg_part()
}

/// One half-twist `sigma_i^{+-1}`, `i` in `1..=3`.
pub fn sigma<T: Pl>(x: &mut Dyn<T>, i: u8, inverse: bool) {
    match i {
        1 => {
            let (a, b) = (x[0].clone(), x[2].clone());
            let (na, nb) = if !inverse {
                let t = pos(b.clone()) - a;
                (b - pos(t.clone()), t)
            } else {
                let t = a + pos(b.clone());
                (-b + pos(t.clone()), t)
            };
            x[0] = na;
            x[2] = nb;
        }
        3 => {
            let (a, b) = (x[1].clone(), x[3].clone());
            let (na, nb) = if !inverse {
                let t = neg(b.clone()) - a;
                (b - neg(t.clone()), t)
            } else {
                let t = a + neg(b.clone());
                (-b + neg(t.clone()), t)
            };
            x[1] = na;
            x[3] = nb;
        }
        2 => {
            let (a0, a1, b0, b1) = (x[0].clone(), x[1].clone(), x[2].clone(), x[3].clone());
            if !inverse {
                let c = a0.clone() - neg(b0.clone()) - a1.clone() + pos(b1.clone());
                x[0] = a0 + pos(b0.clone()) + pos(pos(b1.clone()) - c.clone());
                x[1] = a1 + neg(b1.clone()) + neg(neg(b0.clone()) + c.clone());
                x[2] = b1 - pos(c.clone());
                x[3] = b0 + pos(c);
            } else {
                let d = a0.clone() + neg(b0.clone()) - a1.clone() - pos(b1.clone());
                x[0] = a0 - pos(b0.clone()) - pos(pos(b1.clone()) + d.clone());
                x[1] = a1 - neg(b1.clone()) - neg(neg(b0.clone()) - d.clone());
                x[2] = b1 + neg(d.clone());
                x[3] = b0 - neg(d);
            }
        }
        _ => panic!("half-twist index {i} outside 1..=3"),
    }
}

/// Positive braid word realising the twist about the j-th standard curve.
pub fn twist_braid(j: u8) -> &'static [u8] {
    match j {
        1 => &[2, 2],
        2 => &[1, 2, 1, 2, 1, 2],
        3 => &[1, 1],
        4 => &[3, 3],
        5 => &[2, 3, 2, 3, 2, 3],
        _ => panic!("curve index {j} outside 1..=5"),
    }
}

/// Braid word given as signed generator indices; the rightmost letter acts
/// first.
pub fn apply_braid<T: Pl>(x: &mut Dyn<T>, word: &[i8]) {
    for &g in word.iter().rev() {
        sigma(x, g.unsigned_abs(), g < 0);
    }
}

/// One twist (`inverse = false`) or inverse twist about the j-th standard curve.
pub fn twist_once<T: Pl>(x: &mut Dyn<T>, j: u8, inverse: bool) {
    let w = twist_braid(j);
    if inverse {
        for &g in w.iter() {
            sigma(x, g, true);
        }
    } else {
        for &g in w.iter().rev() {
            sigma(x, g, false);
        }
    }
}

pub fn std_coords<T: Coord>(j: u8) -> Dyn<T> {
    let o = T::one;
    let z = T::zero;
    match j {
        1 => [z(), z(), -o(), o()],
        2 => [z(), z(), z(), o()],
        3 => [z(), z(), o(), z()],
        4 => [z(), z(), z(), -o()],
        5 => [z(), z(), -o(), z()],
        _ => panic!("curve index {j} outside 1..=5"),
    }
}

fn two<T: Coord>() -> T {
    T::one() + T::one()
}

/// Intersections of the lamination with the three vertical arcs through the
/// gaps between consecutive punctures and the boundary.
pub fn betas<T: Coord>(x: &Dyn<T>) -> [T; 3] {
    let [a1, a2, b1, b2] = x.clone();
    let left = a1.abs() + pos(b1.clone());
    let right = a2.abs() + pos(b2.clone()) + b1.clone();
    let beta1 = two::<T>() * left.max(right);
    let beta2 = beta1.clone() - two::<T>() * b1;
    let beta3 = beta2.clone() - two::<T>() * b2;
    [beta1, beta2, beta3]
}

/// Geometric intersection number with the j-th standard curve.
pub fn intersection_std<T: Coord>(x: &Dyn<T>, j: u8) -> T {
    let [a1, a2, b1, b2] = x.clone();
    let t = two::<T>;
    match j {
        1 => t() * (pos(b1) + pos(-b2) + (a1 - a2).abs()),
        2 => betas(x)[2].clone(),
        3 => t() * (pos(-b1) + a1.abs()),
        4 => t() * (pos(b2) + a2.abs()),
        5 => betas(x)[0].clone(),
        _ => panic!("curve index {j} outside 1..=5"),
    }
}

/// Half the total intersection with the five standard curves; equals 2 on
/// each standard curve and is the descent measure for straightening.
pub fn complexity<T: Coord>(x: &Dyn<T>) -> T {
    let mut s = T::zero();
    for j in 1..=5 {
        s = s + intersection_std(x, j);
    }
    s / two::<T>()
}

/// Number of times the lamination crosses the upward vertical ray from each
/// of the four punctures; parity tells whether the puncture lies inside a
/// curve.
pub fn upper_counts<T: Coord>(x: &Dyn<T>) -> [T; 4] {
    let [a1, a2, b1, b2] = x.clone();
    let [beta1, beta2, beta3] = betas(x);
    let t = two::<T>;
    let u2 = beta1.clone() / t() - pos(b1.clone()) - a1 + b1.abs();
    let u3 = beta2 / t() - pos(b2.clone()) - a2 + b2.abs();
    [beta1 / t(), u2, u3, beta3 / t()]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn braid_relations_hold() {
        let xs: Vec<Dyn<i64>> = vec![[3, -2, 5, -1], [0, 0, -1, 1], [7, 4, -3, 2], [-4, 9, 0, -6]];
        for x in xs {
            let mut l = x;
            apply_braid(&mut l, &[1, 2, 1]);
            let mut r = x;
            apply_braid(&mut r, &[2, 1, 2]);
            assert_eq!(l, r);
            let mut l = x;
            apply_braid(&mut l, &[1, 3]);
            let mut r = x;
            apply_braid(&mut r, &[3, 1]);
            assert_eq!(l, r);
            for i in 1..=3 {
                let mut y = x;
                sigma(&mut y, i, false);
                sigma(&mut y, i, true);
                assert_eq!(y, x);
            }
        }
    }

    #[test]
    fn standard_curves_form_a_pentagon() {
        for j in 1..=5u8 {
            let x = std_coords::<i64>(j);
            for l in 1..=5u8 {
                let d = (j as i64 - l as i64).rem_euclid(5);
                let want = if d == 0 || d == 1 || d == 4 { 0 } else { 2 };
                assert_eq!(intersection_std(&x, l), want, "i(a{j}, a{l})");
            }
            assert_eq!(complexity(&x), 2);
            let mut y = x;
            twist_once(&mut y, j, false);
            assert_eq!(y, x);
        }
    }
}
