//! Shared inputs for the criterion benches.

/// Time-domain inputs covering the main atom shapes.
pub const TRANSFORM_INPUTS: &[&str] = &[
    "exp(3*t)",
    "t^3*exp(-2*t)*cos(3*t)",
    "(3 - t^2)*sin(t) - 3*t*cos(t)",
    "t*sinh(2*t) + cosh(t)*sin(4*t)",
];

/// Images in `s`, `u` that invert in closed form.
pub const INVERT_INPUTS: &[&str] = &[
    "u/(s+u)",
    "u^3/((s-u)*(s-2*u)*(s-3*u))",
    "u^6/(s^2+u^2)^3",
    "(s*u^3 + u^4)/((s+u)^2*(s^2+4*u^2))",
];
