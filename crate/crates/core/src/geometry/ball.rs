use super::lambert::lambert_w;
use super::{check_unit_interval, Curve};
use crate::error::{Error, Result};
use crate::manifold::BregmanManifold;
use crate::point::{DualCoordinate, Point};

/// Bregman ball {x : B(center : x) < radius} in the chart selected by
/// `dcoords`.
pub struct BregmanBall<'a> {
    manifold: &'a BregmanManifold,
    center: Point,
    radius: f64,
    dcoords: DualCoordinate,
}

impl<'a> BregmanBall<'a> {
    pub fn new(
        m: &'a BregmanManifold,
        center: &Point,
        radius: f64,
        dc: DualCoordinate,
    ) -> Result<Self> {
        if !(radius >= 0.0 && radius.is_finite()) {
            return Err(Error::invalid(format!("ball radius must be non-negative, got {radius}")));
        }
        m.coords_in(center, dc)?;
        Ok(BregmanBall { manifold: m, center: center.clone(), radius, dcoords: dc })
    }

    pub fn manifold(&self) -> &BregmanManifold {
        self.manifold
    }

    pub fn center(&self) -> &Point {
        &self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn dcoords(&self) -> DualCoordinate {
        self.dcoords
    }

    /// Strict membership: B(center : x) < radius.
    pub fn is_in(&self, x: &Point) -> Result<bool> {
        ball_is_in(self, x)
    }
}

/// Membership predicate of a Bregman ball; boundary points are outside
/// (strict inequality).
pub fn ball_is_in(ball: &BregmanBall<'_>, x: &Point) -> Result<bool> {
    let m = ball.manifold;
    let c = m.coords_in(&ball.center, ball.dcoords)?;
    let y = m.coords_in(x, ball.dcoords)?;
    let div = m.chart_potential(ball.dcoords).bregman(&c, &y)?;
    Ok(div < ball.radius)
}

/// Boundary of the extended-KL sphere {x > 0 : B(center : x) = radius} in
/// the plane, traced in closed form with the two real Lambert W branches.
///
/// Each boundary point splits the divergence budget r between the two
/// coordinates as (r·s, r·(1−s)); the 1-D equation
/// c·log(c/x) − c + x = ρ is solved by x = −c·W_b(−e^{−1−ρ/c}), where
/// branch b = 0 lands left of c and branch −1 right of c. Four arcs (one
/// per branch pair), with s running linearly within each, close the loop.
pub struct EklBallCurve {
    center: Point,
    radius: f64,
}

/// Builds the boundary curve. The center must be a strictly positive
/// 2-vector (the source coordinates of the extended-KL plane).
pub fn ekl_ball_curve(center: &Point, radius: f64) -> Result<EklBallCurve> {
    if center.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: center.dim() });
    }
    for (i, &c) in center.data.iter().enumerate() {
        if c <= 0.0 {
            return Err(Error::domain(i, "extended-KL sphere center must be strictly positive"));
        }
    }
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::invalid(format!("sphere radius must be positive, got {radius}")));
    }
    Ok(EklBallCurve { center: center.clone(), radius })
}

impl EklBallCurve {
    pub fn center(&self) -> &Point {
        &self.center
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Solves c·log(c/x) − c + x = ρ for x on the requested side of c.
    fn coordinate(c: f64, rho: f64, branch: i32) -> Result<f64> {
        let arg = -(-1.0 - rho / c).exp();
        Ok(-c * lambert_w(branch, arg)?)
    }
}

impl Curve for EklBallCurve {
    fn point_at(&self, t: f64) -> Result<Point> {
        check_unit_interval(t)?;
        // Four arcs over t: budget share s on coordinate 1 sweeps
        // 1→0→1→0→1 while the branch pair fixes the side of the center:
        // (0,0) left/left, (−1,0) right/left, (−1,−1) right/right,
        // (0,−1) left/right. Arc joins coincide because ρ = 0 gives x = c
        // on either branch.
        let arc = ((t * 4.0).floor() as usize).min(3);
        let s = match arc {
            0 => 1.0 - 4.0 * t,
            1 => 4.0 * t - 1.0,
            2 => 3.0 - 4.0 * t,
            _ => 4.0 * t - 3.0,
        };
        let (b1, b2) = match arc {
            0 => (0, 0),
            1 => (-1, 0),
            2 => (-1, -1),
            _ => (0, -1),
        };
        let c = &self.center.data;
        let x1 = Self::coordinate(c[0], self.radius * s, b1)?;
        let x2 = Self::coordinate(c[1], self.radius * (1.0 - s), b2)?;
        Point::new(self.center.coords.clone(), vec![x1, x2])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generator::QuadraticGenerator;
    use approx::assert_relative_eq;
    use std::sync::Arc;

    fn ekl_term(c: f64, x: f64) -> f64 {
        c * (c / x).ln() - c + x
    }

    #[test]
    fn center_is_inside_any_positive_radius() {
        let m = BregmanManifold::new(Arc::new(QuadraticGenerator { dim: 2 }), None).unwrap();
        let c = Point::theta(vec![0.3, -0.4]).unwrap();
        let ball = BregmanBall::new(&m, &c, 1.0, DualCoordinate::Primal).unwrap();
        assert!(ball.is_in(&c).unwrap());
        let zero = BregmanBall::new(&m, &c, 0.0, DualCoordinate::Primal).unwrap();
        assert!(!zero.is_in(&c).unwrap());
    }

    #[test]
    fn quadratic_ball_is_a_euclidean_disk() {
        let m = BregmanManifold::new(Arc::new(QuadraticGenerator { dim: 2 }), None).unwrap();
        let c = Point::theta(vec![0.0, 0.0]).unwrap();
        let ball = BregmanBall::new(&m, &c, 0.5, DualCoordinate::Primal).unwrap();
        // B(c:x) = ½‖x‖², so radius ½ means ‖x‖ < 1.
        assert!(ball.is_in(&Point::theta(vec![0.7, 0.7]).unwrap()).unwrap());
        assert!(!ball.is_in(&Point::theta(vec![0.9, 0.9]).unwrap()).unwrap());
    }

    #[test]
    fn curve_start_solves_the_full_budget_equation() {
        // At t = 0 the whole budget sits on coordinate 1 with branch 0.
        let center = Point::lambda(vec![1.0, 1.0]).unwrap();
        let curve = ekl_ball_curve(&center, 0.1).unwrap();
        let p = curve.point_at(0.0).unwrap();
        assert_relative_eq!(p.data[1], 1.0, epsilon = 1e-12);
        assert!(p.data[0] < 1.0);
        // Independent bisection oracle for c·log(c/x) − c + x = ρ, c = 1.
        let (mut lo, mut hi) = (1e-12, 1.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if ekl_term(1.0, mid) > 0.1 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        assert_relative_eq!(p.data[0], 0.5 * (lo + hi), epsilon = 1e-10);
    }

    #[test]
    fn all_samples_sit_on_the_sphere() {
        let center = Point::lambda(vec![0.8, 1.7]).unwrap();
        let r = 0.35;
        let curve = ekl_ball_curve(&center, r).unwrap();
        for p in curve.sample(256).unwrap() {
            let b = ekl_term(0.8, p.data[0]) + ekl_term(1.7, p.data[1]);
            assert_relative_eq!(b, r, epsilon = 1e-8);
        }
    }

    #[test]
    fn coordinate_swap_symmetry() {
        let center = Point::lambda(vec![0.5, 2.0]).unwrap();
        let swapped = Point::lambda(vec![2.0, 0.5]).unwrap();
        let r = 0.2;
        let a = ekl_ball_curve(&center, r).unwrap();
        let b = ekl_ball_curve(&swapped, r).unwrap();
        for i in 0..=64 {
            let t = i as f64 / 64.0;
            let tp = (1.25 - t).rem_euclid(1.0);
            let pa = a.point_at(t).unwrap();
            let pb = b.point_at(tp).unwrap();
            assert_relative_eq!(pa.data[0], pb.data[1], epsilon = 1e-9);
            assert_relative_eq!(pa.data[1], pb.data[0], epsilon = 1e-9);
        }
    }

    #[test]
    fn invalid_inputs_are_rejected() {
        let center = Point::lambda(vec![1.0, 1.0]).unwrap();
        assert!(ekl_ball_curve(&center, 0.0).is_err());
        assert!(ekl_ball_curve(&center, -1.0).is_err());
        let bad = Point::lambda(vec![1.0, -1.0]).unwrap();
        assert!(ekl_ball_curve(&bad, 0.1).is_err());
        let wrong_dim = Point::lambda(vec![1.0, 1.0, 1.0]).unwrap();
        assert!(ekl_ball_curve(&wrong_dim, 0.1).is_err());
    }
}
