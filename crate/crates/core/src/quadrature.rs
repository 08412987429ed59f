//! Fixed-order Gauss–Legendre panels.

const NODES: [f64; 4] = [
    0.183_434_642_495_649_8,
    0.525_532_409_916_329,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_3,
];
const WEIGHTS: [f64; 4] = [
    0.362_683_783_378_362,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_5,
    0.101_228_536_290_376_3,
];

/// 8-point Gauss–Legendre rule on `[a, b]`; exact for degree 15.
pub(crate) fn gauss_legendre<T, F>(a: f64, b: f64, mut f: F) -> Result<T, crate::Error>
where
    T: core::ops::Add<Output = T> + core::ops::Mul<f64, Output = T> + Default,
    F: FnMut(f64) -> Result<T, crate::Error>,
{
    let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
    let mut acc = T::default();
    for (x, w) in NODES.iter().zip(WEIGHTS.iter()) {
        acc = acc + f(mid - half * x)? * (w * half);
        acc = acc + f(mid + half * x)? * (w * half);
    }
    Ok(acc)
}
