//! Float math shims: inherent `f64` methods under `std`, `libm` otherwise.

#![allow(dead_code)]

#[cfg(all(not(feature = "std"), not(feature = "libm")))]
compile_error!("rbflow-core requires either the `std` feature or the `libm` feature");

macro_rules! shim {
    ($name:ident, $method:ident, $libm:ident) => {
        #[inline]
        pub(crate) fn $name(x: f64) -> f64 {
            #[cfg(feature = "std")]
            {
                x.$method()
            }
            #[cfg(all(not(feature = "std"), feature = "libm"))]
            {
                libm::$libm(x)
            }
        }
    };
}

shim!(ln, ln, log);
shim!(sin, sin, sin);
shim!(cos, cos, cos);
shim!(exp, exp, exp);
shim!(sqrt, sqrt, sqrt);
shim!(cosh, cosh, cosh);
shim!(sinh, sinh, sinh);
shim!(tanh, tanh, tanh);
shim!(floor, floor, floor);
shim!(log10, log10, log10);

#[inline]
pub(crate) fn powf(x: f64, y: f64) -> f64 {
    #[cfg(feature = "std")]
    {
        x.powf(y)
    }
    #[cfg(all(not(feature = "std"), feature = "libm"))]
    {
        libm::pow(x, y)
    }
}

#[inline]
pub(crate) fn abs(x: f64) -> f64 {
    f64::from_bits(x.to_bits() & (u64::MAX >> 1))
}

#[inline]
pub(crate) fn max(a: f64, b: f64) -> f64 {
    if a >= b || b.is_nan() {
        a
    } else {
        b
    }
}

#[inline]
pub(crate) fn min(a: f64, b: f64) -> f64 {
    if a <= b || b.is_nan() {
        a
    } else {
        b
    }
}

#[inline]
pub(crate) fn coth(x: f64) -> f64 {
    1.0 / tanh(x)
}

#[inline]
pub(crate) fn pos_part(x: f64) -> f64 {
    if x > 0.0 {
        x
    } else {
        0.0
    }
}
