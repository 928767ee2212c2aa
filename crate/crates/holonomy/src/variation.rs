use std::f64::consts::SQRT_2;

use nalgebra::{Matrix4, Vector4};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::frame::c;
use crate::{
    connection_matrix, cubic_direction, h_pairing, quadratic_direction, BaseFrame, HolonomyError, Mat3, OrbitData,
    Part, Sampler, Vec3,
};

/// Which differential drives the first-order perturbation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// Cubic differential, perturbation [`cubic_direction`].
    Cubic,
    /// Quadratic differential, perturbation [`quadratic_direction`].
    Quadratic,
}

impl Direction {
    /// The perturbation matrix for the sampled value `q`.
    pub fn matrix(self, q: Complex64) -> Mat3 {
        match self {
            Direction::Cubic => cubic_direction(q),
            Direction::Quadratic => quadratic_direction(q),
        }
    }
}

/// One term `coeff · e^{k s} · part(q(s))` of a forcing coefficient.
#[derive(Debug, Clone, Copy)]
struct Term {
    coeff: Complex64,
    k: f64,
    part: Part,
}

impl Term {
    #[cfg(test)]
    fn part_of(&self, z: Complex64) -> f64 {
        match self.part {
            Part::Re => z.re,
            Part::Im => z.im,
        }
    }
}

const fn term(re: f64, im: f64, k: f64, part: Part) -> Term {
    Term {
        coeff: Complex64::new(re, im),
        k,
        part,
    }
}

/// Coefficients `gⱼ(s)` of the forcing `−B(q(s)) eᵢ(s)` in the eigenbasis:
/// `−B eᵢ = Σⱼ gⱼ eⱼ`.
fn forcing_terms(direction: Direction, i: usize) -> [Vec<Term>; 3] {
    use Part::{Im, Re};
    let r = SQRT_2;
    match (direction, i) {
        (Direction::Cubic, 1) => [vec![term(-1.0, 0.0, 0.0, Re)], vec![term(0.0, r, 1.0, Im)], vec![term(-1.0, 0.0, 2.0, Re)]],
        (Direction::Cubic, 2) => [vec![term(0.0, -r, -1.0, Im)], vec![term(2.0, 0.0, 0.0, Re)], vec![term(0.0, -r, 1.0, Im)]],
        (Direction::Cubic, _) => [vec![term(-1.0, 0.0, -2.0, Re)], vec![term(0.0, r, -1.0, Im)], vec![term(-1.0, 0.0, 0.0, Re)]],
        (Direction::Quadratic, 1) => [vec![term(2.0, 0.0, 0.0, Re)], vec![term(0.0, -r, 1.0, Im)], vec![]],
        (Direction::Quadratic, 2) => [vec![term(0.0, r, -1.0, Im)], vec![], vec![term(0.0, -r, 1.0, Im)]],
        (Direction::Quadratic, _) => [vec![], vec![term(0.0, r, -1.0, Im)], vec![term(-2.0, 0.0, 0.0, Re)]],
    }
}

/// The closed-form first variation `y = ∂eᵢ` of a parallel eigenvector.
///
/// `y` solves `y' + M y = −B(q(t)) eᵢ(t)` with `H(eᵢ(0), y(0)) = 0` and
/// `y(l) = λᵢ y(0) + λᵢ' eᵢ(0)`. Writing `y = Σⱼ cⱼ(t) eⱼ(t)` turns the
/// system into `cⱼ' = gⱼ`; the boundary conditions fix `cᵢ(0) = 0`,
/// `cⱼ(0) = λⱼ Gⱼ / (λᵢ − λⱼ)` for `j ≠ i` and `λᵢ' = λᵢ Gᵢ`, where
/// `Gⱼ = ∫₀ˡ gⱼ`.
#[derive(Debug, Clone)]
pub struct VariationPath {
    frame: BaseFrame,
    direction: Direction,
    i: usize,
    q: Sampler,
    terms: [Vec<Term>; 3],
    c0: [Complex64; 3],
    lambda_prime: Complex64,
}

/// Boundary residuals of a variation path.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryResiduals {
    /// `|H(eᵢ(0), y(0))|`.
    pub orthogonality: f64,
    /// `|y(l) − λᵢ y(0) − λᵢ' eᵢ(0)| / max(1, λᵢ)`.
    pub monodromy: f64,
}

impl VariationPath {
    /// The variation of `eᵢ` (`i ∈ {1, 2, 3}`) along the forcing sampler
    /// `q` in the given direction, on an orbit of length `l`.
    pub fn new(l: f64, direction: Direction, i: usize, q: Sampler) -> Result<Self, HolonomyError> {
        if !(1..=3).contains(&i) {
            return Err(HolonomyError::InvalidInput(format!("eigenvector index {i}")));
        }
        let frame = BaseFrame::new(l)?;
        let terms = forcing_terms(direction, i);
        let mut path = VariationPath {
            frame,
            direction,
            i,
            q,
            terms,
            c0: [c(0.0); 3],
            lambda_prime: c(0.0),
        };
        let lambda = frame.eigenvalues();
        let li = lambda[i - 1];
        for j in 0..3 {
            let big_g = path.integral(j, l)?;
            if j + 1 == i {
                path.lambda_prime = big_g * li;
            } else {
                path.c0[j] = big_g * (lambda[j] / (li - lambda[j]));
            }
        }
        Ok(path)
    }

    /// `Gⱼ(t) = ∫₀ᵗ gⱼ`.
    fn integral(&self, j: usize, t: f64) -> Result<Complex64, HolonomyError> {
        let mut acc = c(0.0);
        for tm in &self.terms[j] {
            acc += tm.coeff * self.q.kernel(tm.k, 0.0, tm.part, 0.0, t)?;
        }
        Ok(acc)
    }

    /// The eigenvector index `i`.
    pub fn index(&self) -> usize {
        self.i
    }

    /// The base frame.
    pub fn frame(&self) -> &BaseFrame {
        &self.frame
    }

    /// `λᵢ'`, the first variation of the holonomy eigenvalue.
    pub fn lambda_prime(&self) -> Complex64 {
        self.lambda_prime
    }

    /// Eigen-coefficients `cⱼ(t)` of `y(t)`.
    pub fn coefficients(&self, t: f64) -> Result<[Complex64; 3], HolonomyError> {
        Ok([
            self.c0[0] + self.integral(0, t)?,
            self.c0[1] + self.integral(1, t)?,
            self.c0[2] + self.integral(2, t)?,
        ])
    }

    /// `y(t) = ∂eᵢ(t)`.
    pub fn eval(&self, t: f64) -> Result<Vec3, HolonomyError> {
        let cs = self.coefficients(t)?;
        Ok((0..3).fold(Vec3::zeros(), |acc, j| acc + self.frame.eigenvector(j + 1, t) * cs[j]))
    }

    /// The forcing `−B(q(t)) eᵢ(t)`.
    pub fn forcing(&self, t: f64) -> Vec3 {
        -(self.direction.matrix(self.q.eval(t)) * self.frame.eigenvector(self.i, t))
    }

    /// Residuals of both boundary conditions.
    pub fn boundary_residuals(&self) -> Result<BoundaryResiduals, HolonomyError> {
        let l = self.frame.length();
        let e0 = self.frame.eigenvector(self.i, 0.0);
        let y0 = self.eval(0.0)?;
        let li = self.frame.eigenvalue(self.i);
        let defect = self.eval(l)? - y0 * c(li) - e0 * self.lambda_prime;
        Ok(BoundaryResiduals {
            orthogonality: h_pairing(&e0, &y0).norm(),
            monodromy: defect.norm() / li.max(1.0),
        })
    }

    /// Largest residual of the ODE in integrated form over `cells` equal
    /// cells of `[0, l]`: `|y(b) − y(a) + ∫_a^b (M y − f)|`, relative to
    /// `max(1, sup |y|)`. The cell integrals use adaptive quadrature.
    pub fn ode_residual(&self, cells: usize) -> Result<f64, HolonomyError> {
        let l = self.frame.length();
        let m = connection_matrix();
        let h = l / cells.max(1) as f64;
        let rhs = |t: f64| -> Vec3 {
            match self.eval(t) {
                Ok(y) => m * y - self.forcing(t),
                Err(_) => Vec3::repeat(c(f64::NAN)),
            }
        };
        let mut worst: f64 = 0.0;
        let mut scale: f64 = 1.0;
        let mut prev = self.eval(0.0)?;
        for k in 0..cells.max(1) {
            let (a, b) = (k as f64 * h, (k + 1) as f64 * h);
            let next = self.eval(b)?;
            scale = scale.max(next.norm());
            let mut integral = Vec3::zeros();
            for comp in 0..3 {
                let re = quadrature::double_exponential::integrate(|t| rhs(t)[comp].re, a, b, 1e-13);
                let im = quadrature::double_exponential::integrate(|t| rhs(t)[comp].im, a, b, 1e-13);
                if !re.integral.is_finite() || !im.integral.is_finite() {
                    return Err(HolonomyError::QuadratureFailure {
                        estimate: re.error_estimate.max(im.error_estimate),
                    });
                }
                integral[comp] = Complex64::new(re.integral, im.integral);
            }
            worst = worst.max((next - prev + integral).norm());
            prev = next;
        }
        Ok(worst / scale)
    }
}

/// The closed-form variation of `eᵢ` driven by `q_β` (cubic) or `q_i`
/// (quadratic) of the orbit.
pub fn variation_ode_closed_form(i: usize, orbit: &OrbitData, direction: Direction) -> Result<VariationPath, HolonomyError> {
    orbit.check_periodic()?;
    let q = match direction {
        Direction::Cubic => orbit.q_beta.clone(),
        Direction::Quadratic => orbit.q_i.clone(),
    };
    VariationPath::new(orbit.length(), direction, i, q)
}

/// The boundary-value problem of a [`VariationPath`] solved by shooting.
#[derive(Debug, Clone, PartialEq)]
pub struct ShootingSolution {
    /// `y(0)`.
    pub y0: Vec3,
    /// `λᵢ'`.
    pub lambda_prime: Complex64,
    /// Grid times `kl/steps`.
    pub times: Vec<f64>,
    /// `y` on the grid.
    pub values: Vec<Vec3>,
}

fn rk4_forced(path: &VariationPath, y0: Vec3, steps: usize) -> Vec<Vec3> {
    let m = connection_matrix();
    let h = path.frame.length() / steps as f64;
    let rhs = |t: f64, y: &Vec3| path.forcing(t) - m * y;
    let mut y = y0;
    let mut out = Vec::with_capacity(steps + 1);
    out.push(y);
    for k in 0..steps {
        let t = k as f64 * h;
        let k1 = rhs(t, &y);
        let k2 = rhs(t + 0.5 * h, &(y + k1 * c(0.5 * h)));
        let k3 = rhs(t + 0.5 * h, &(y + k2 * c(0.5 * h)));
        let k4 = rhs(t + h, &(y + k3 * c(h)));
        y += (k1 + k2 * c(2.0) + k3 * c(2.0) + k4) * c(h / 6.0);
        out.push(y);
    }
    out
}

/// Solves the boundary-value problem of `path` without its closed form.
///
/// The particular solution `p` from `y(0) = 0` and the monodromy `Φ(l)` are
/// integrated by RK4; the 4×4 linear system `(Φ(l) − λᵢ) y₀ − λᵢ' eᵢ(0) =
/// −p(l)`, `H(eᵢ(0), y₀) = 0` gives the initial value, which is integrated
/// again on the grid.
pub fn shooting_solution(path: &VariationPath, steps: usize) -> Result<ShootingSolution, HolonomyError> {
    if steps == 0 {
        return Err(HolonomyError::InvalidInput("zero steps".into()));
    }
    let l = path.frame.length();
    let m = connection_matrix();
    let phi = crate::fundamental_solution(&|_| m, l, steps)?.value;
    let p = *rk4_forced(path, Vec3::zeros(), steps).last().expect("non-empty grid");
    let e0 = path.frame.eigenvector(path.i, 0.0);
    let li = c(path.frame.eigenvalue(path.i));
    let mut a = Matrix4::<Complex64>::zeros();
    let mut rhs = Vector4::<Complex64>::zeros();
    for r in 0..3 {
        for k in 0..3 {
            a[(r, k)] = phi[(r, k)] - if r == k { li } else { c(0.0) };
        }
        a[(r, 3)] = -e0[r];
        rhs[r] = -p[r];
    }
    for k in 0..3 {
        a[(3, k)] = e0[k].conj() * crate::HERMITIAN_DIAGONAL[k];
    }
    let sol = a
        .lu()
        .solve(&rhs)
        .ok_or_else(|| HolonomyError::InvalidInput("singular shooting system".into()))?;
    let y0 = Vec3::new(sol[0], sol[1], sol[2]);
    let values = rk4_forced(path, y0, steps);
    let times = (0..=steps).map(|k| l * k as f64 / steps as f64).collect();
    Ok(ShootingSolution {
        y0,
        lambda_prime: sol[3],
        times,
        values,
    })
}

/// `max_k |y_closed(t_k) − y_shoot(t_k)|` relative to `max(1, sup |y|)`,
/// together with `|λ'_closed − λ'_shoot|`.
pub fn shooting_deviation(path: &VariationPath, steps: usize) -> Result<(f64, f64), HolonomyError> {
    let shoot = shooting_solution(path, steps)?;
    let mut worst: f64 = 0.0;
    let mut scale: f64 = 1.0;
    for (t, y) in shoot.times.iter().zip(&shoot.values) {
        let closed = path.eval(*t)?;
        scale = scale.max(closed.norm());
        worst = worst.max((closed - y).norm());
    }
    Ok((worst / scale, (shoot.lambda_prime - path.lambda_prime()).norm()))
}
