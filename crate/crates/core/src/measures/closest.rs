//! Closed-form single-coordinate extremes over the extended technology and
//! the maximal Russell measure built from them.
//!
//! With facet slacks `σ_k = ψ^k + v^k·x − u^k·y ≥ 0` at the assessed point,
//! shrinking input `i` alone stays feasible down to
//! `θ′_i = max(0, 1 − min_k σ_k / (v^k_i x_i))` and growing output `r` alone
//! stays feasible up to `φ′_r = 1 + min_k σ_k / (u^k_r y_r)`: each facet row
//! is affine in the single moving coordinate, so the extreme is the tightest
//! facet's ratio. The maximal Russell measure compares the best single-input
//! move against the best single-output move:
//! `G = (1/(m+s)) · max(m+s−D⁻, m+s−D⁺/(1+D⁺))`.

use crate::data::Point;
use crate::facets::ExtendedTechnology;
use crate::real::Real;

use super::{build_result, require_strictly_positive, MaxRmResult, MeasureError, Model, Side};

fn clamped_slacks<T: Real>(exfa: &ExtendedTechnology<T>, dmu: &Point<T>) -> Vec<T> {
    exfa.facet_slacks(dmu).into_iter().map(|s| s.max(T::zero())).collect()
}

fn check_member<T: Real>(exfa: &ExtendedTechnology<T>, dmu: &Point<T>) -> Result<(), MeasureError> {
    require_strictly_positive(dmu)?;
    if !exfa.contains(dmu) {
        return Err(MeasureError::PointOutsideTechnology);
    }
    Ok(())
}

pub(crate) fn theta_prime_all<T: Real>(exfa: &ExtendedTechnology<T>, dmu: &Point<T>) -> Vec<T> {
    let slacks = clamped_slacks(exfa, dmu);
    (0..exfa.num_inputs())
        .map(|i| {
            let ratio = exfa
                .facets()
                .iter()
                .zip(&slacks)
                .map(|(f, &s)| s / (f.hyperplane.v[i] * dmu.x[i]))
                .fold(T::infinity(), T::min);
            (T::one() - ratio).max(T::zero())
        })
        .collect()
}

pub(crate) fn phi_prime_all<T: Real>(exfa: &ExtendedTechnology<T>, dmu: &Point<T>) -> Vec<T> {
    let slacks = clamped_slacks(exfa, dmu);
    (0..exfa.num_outputs())
        .map(|r| {
            let ratio = exfa
                .facets()
                .iter()
                .zip(&slacks)
                .map(|(f, &s)| s / (f.hyperplane.u[r] * dmu.y[r]))
                .fold(T::infinity(), T::min);
            T::one() + ratio
        })
        .collect()
}

/// Smallest feasible contraction factor of input `i` alone.
pub fn theta_prime<T: Real>(
    exfa: &ExtendedTechnology<T>,
    dmu: &Point<T>,
    i: usize,
) -> Result<T, MeasureError> {
    check_member(exfa, dmu)?;
    Ok(theta_prime_all(exfa, dmu)[i])
}

/// Largest feasible expansion factor of output `r` alone.
pub fn phi_prime<T: Real>(
    exfa: &ExtendedTechnology<T>,
    dmu: &Point<T>,
    r: usize,
) -> Result<T, MeasureError> {
    check_member(exfa, dmu)?;
    Ok(phi_prime_all(exfa, dmu)[r])
}

/// Input-side distance `1 − max_i θ′_i`.
pub fn d_minus<T: Real>(exfa: &ExtendedTechnology<T>, dmu: &Point<T>) -> Result<T, MeasureError> {
    check_member(exfa, dmu)?;
    let theta = theta_prime_all(exfa, dmu);
    Ok(T::one() - theta.into_iter().fold(T::neg_infinity(), T::max))
}

/// Output-side distance `min_r φ′_r − 1`.
pub fn d_plus<T: Real>(exfa: &ExtendedTechnology<T>, dmu: &Point<T>) -> Result<T, MeasureError> {
    check_member(exfa, dmu)?;
    let phi = phi_prime_all(exfa, dmu);
    Ok(phi.into_iter().fold(T::infinity(), T::min) - T::one())
}

/// Maximal Russell measure over the extended technology. The maximum over
/// the strong frontier is attained by moving a single coordinate: the best
/// input contraction scores `(m+s−D⁻)/(m+s)` and the best output expansion
/// `(m+s−D⁺/(1+D⁺))/(m+s)`; ties prefer the output side, and coordinate
/// ties the lowest index. The projection therefore differs from the DMU in
/// at most one coordinate.
pub fn max_rm<T: Real>(
    exfa: &ExtendedTechnology<T>,
    dmu: &Point<T>,
) -> Result<MaxRmResult<T>, MeasureError> {
    check_member(exfa, dmu)?;
    let (m, s) = (exfa.num_inputs(), exfa.num_outputs());
    let dim = T::of((m + s) as f64);

    let theta_prime = theta_prime_all(exfa, dmu);
    let phi_prime = phi_prime_all(exfa, dmu);
    let max_theta = theta_prime.iter().copied().fold(T::neg_infinity(), T::max);
    let min_phi = phi_prime.iter().copied().fold(T::infinity(), T::min);
    let d_minus = T::one() - max_theta;
    let d_plus = min_phi - T::one();

    let input_value = dim - d_minus;
    let output_value = dim - d_plus / (T::one() + d_plus);

    let mut theta = vec![T::one(); m];
    let mut phi = vec![T::one(); s];
    let side = if output_value >= input_value {
        let r = phi_prime
            .iter()
            .position(|&f| f == min_phi)
            .expect("min over nonempty outputs");
        phi[r] = phi_prime[r];
        Side::Output
    } else {
        // The input side can only win strictly with max θ′ > 0 (otherwise
        // its value m+s−1 never exceeds the output side's), so restricting
        // the argmax to positive θ′ loses nothing.
        let i = theta_prime
            .iter()
            .position(|&t| t == max_theta && t > T::zero())
            .expect("strictly winning input has positive extreme");
        theta[i] = theta_prime[i];
        Side::Input
    };
    let score = input_value.max(output_value) / dim;

    let projection = Point::new(
        dmu.x.iter().zip(&theta).map(|(&x, &t)| x * t).collect(),
        dmu.y.iter().zip(&phi).map(|(&y, &f)| y * f).collect(),
    );
    let active_facet = exfa.active_facets(&projection).first().copied();
    let result = build_result(Model::MaxRm, score, theta, phi, dmu, active_facet, exfa.tolerances());
    Ok(MaxRmResult { result, theta_prime, phi_prime, d_minus, d_plus, side })
}
