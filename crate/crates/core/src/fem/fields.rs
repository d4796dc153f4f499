//! Closed-form scalar and vector fields with analytic derivatives.

pub trait ScalarField {
    fn value(&self, x: [f64; 3]) -> f64;
    fn grad(&self, x: [f64; 3]) -> [f64; 3];
}

pub trait VectorField {
    fn value(&self, x: [f64; 3]) -> [f64; 3];
    fn curl(&self, x: [f64; 3]) -> [f64; 3];
    fn div(&self, x: [f64; 3]) -> f64;
}

/// Gradient of a scalar field, viewed as a vector field.
pub struct Gradient<'a>(pub &'a dyn ScalarField);

impl VectorField for Gradient<'_> {
    fn value(&self, x: [f64; 3]) -> [f64; 3] {
        self.0.grad(x)
    }
    fn curl(&self, _x: [f64; 3]) -> [f64; 3] {
        [0.0; 3]
    }
    fn div(&self, _x: [f64; 3]) -> f64 {
        // not needed by any caller; a Laplacian would require second derivatives
        f64::NAN
    }
}

/// Curl of a vector field, viewed as a vector field.
pub struct Curl<'a>(pub &'a dyn VectorField);

impl VectorField for Curl<'_> {
    fn value(&self, x: [f64; 3]) -> [f64; 3] {
        self.0.curl(x)
    }
    fn curl(&self, _x: [f64; 3]) -> [f64; 3] {
        [f64::NAN; 3]
    }
    fn div(&self, _x: [f64; 3]) -> f64 {
        0.0
    }
}

/// Divergence of a vector field, viewed as a scalar field.
pub struct Divergence<'a>(pub &'a dyn VectorField);

impl ScalarField for Divergence<'_> {
    fn value(&self, x: [f64; 3]) -> f64 {
        self.0.div(x)
    }
    fn grad(&self, _x: [f64; 3]) -> [f64; 3] {
        [f64::NAN; 3]
    }
}

fn monomials(x: [f64; 3]) -> [f64; 10] {
    let [a, b, c] = x;
    [1.0, a, b, c, a * a, b * b, c * c, a * b, a * c, b * c]
}

fn monomial_partials(x: [f64; 3]) -> [[f64; 10]; 3] {
    let [a, b, c] = x;
    [
        [0.0, 1.0, 0.0, 0.0, 2.0 * a, 0.0, 0.0, b, c, 0.0],
        [0.0, 0.0, 1.0, 0.0, 0.0, 2.0 * b, 0.0, a, 0.0, c],
        [0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 2.0 * c, 0.0, a, b],
    ]
}

fn contract(c: &[f64; 10], m: &[f64; 10]) -> f64 {
    c.iter().zip(m).map(|(a, b)| a * b).sum()
}

/// Polynomial of total degree at most two.
#[derive(Clone, Debug)]
pub struct QuadraticScalar {
    pub coeffs: [f64; 10],
}

impl ScalarField for QuadraticScalar {
    fn value(&self, x: [f64; 3]) -> f64 {
        contract(&self.coeffs, &monomials(x))
    }
    fn grad(&self, x: [f64; 3]) -> [f64; 3] {
        let d = monomial_partials(x);
        [contract(&self.coeffs, &d[0]), contract(&self.coeffs, &d[1]), contract(&self.coeffs, &d[2])]
    }
}

/// Vector field whose components are polynomials of degree at most two.
#[derive(Clone, Debug)]
pub struct QuadraticVector {
    pub coeffs: [[f64; 10]; 3],
}

impl QuadraticVector {
    fn jacobian(&self, x: [f64; 3]) -> [[f64; 3]; 3] {
        // j[i][k] = d u_i / d x_k
        let d = monomial_partials(x);
        let mut j = [[0.0; 3]; 3];
        for i in 0..3 {
            for k in 0..3 {
                j[i][k] = contract(&self.coeffs[i], &d[k]);
            }
        }
        j
    }
}

impl VectorField for QuadraticVector {
    fn value(&self, x: [f64; 3]) -> [f64; 3] {
        let m = monomials(x);
        [contract(&self.coeffs[0], &m), contract(&self.coeffs[1], &m), contract(&self.coeffs[2], &m)]
    }
    fn curl(&self, x: [f64; 3]) -> [f64; 3] {
        let j = self.jacobian(x);
        [j[2][1] - j[1][2], j[0][2] - j[2][0], j[1][0] - j[0][1]]
    }
    fn div(&self, x: [f64; 3]) -> f64 {
        let j = self.jacobian(x);
        j[0][0] + j[1][1] + j[2][2]
    }
}

type Fn3<T> = Box<dyn Fn([f64; 3]) -> T + Send + Sync>;

/// Scalar field from closures.
pub struct FnScalar {
    pub value: Fn3<f64>,
    pub grad: Fn3<[f64; 3]>,
}

impl ScalarField for FnScalar {
    fn value(&self, x: [f64; 3]) -> f64 {
        (self.value)(x)
    }
    fn grad(&self, x: [f64; 3]) -> [f64; 3] {
        (self.grad)(x)
    }
}

/// Vector field from closures.
pub struct FnVector {
    pub value: Fn3<[f64; 3]>,
    pub curl: Fn3<[f64; 3]>,
    pub div: Fn3<f64>,
}

impl VectorField for FnVector {
    fn value(&self, x: [f64; 3]) -> [f64; 3] {
        (self.value)(x)
    }
    fn curl(&self, x: [f64; 3]) -> [f64; 3] {
        (self.curl)(x)
    }
    fn div(&self, x: [f64; 3]) -> f64 {
        (self.div)(x)
    }
}
