use monenv_core::oracle::streams::stream;
use monenv_core::oracle::{mc_volume, ray_area, ray_volume, ray_volume_between, sampling};
use monenv_core::{relative_gap, validate, Monomial, MonomialInstance, VolumeOptions};
use rand::Rng;

fn conic_example() -> Monomial {
    validate(MonomialInstance::planar([1.7, 1.5], 0.35, 3.0, 0.4, 10.0)).unwrap()
}

fn concave_example() -> Monomial {
    validate(MonomialInstance::planar([0.1, 0.2], 0.4, 3.3, 0.65, 1.21)).unwrap()
}

fn random_planar(rng: &mut impl Rng) -> Monomial {
    let a = [rng.random_range(0.05..4.0), rng.random_range(0.05..4.0)];
    let p = rng.random_range(0.1..2.0);
    let q = p * rng.random_range(1.2..8.0);
    let l = rng.random_range(0.1..3.0);
    let u = l * rng.random_range(1.1..10.0);
    validate(MonomialInstance::planar(a, p, q, l, u)).unwrap()
}

/// `count` heights evenly spread over `[l, u]`, both ends exact.
fn heights(m: &Monomial, count: usize) -> impl Iterator<Item = f64> + '_ {
    (0..count).map(move |k| {
        if k + 1 == count {
            m.upper()
        } else {
            m.lower() + (m.upper() - m.lower()) * k as f64 / (count - 1) as f64
        }
    })
}

fn pair(m: &Monomial, x: [f64; 2]) -> (f64, f64) {
    m.wedge_pair(&x)
}

#[test]
fn corners_lie_on_faces_and_level_sets() {
    let mut rng = stream(101, 0);
    for _ in 0..100 {
        let m = random_planar(&mut rng);
        let w = *m.wedge_params();
        for z in heights(&m, 100) {
            let c = m.cross_section(z).unwrap();
            for (pt, ratio) in [(c.lp, m.p()), (c.up, m.p()), (c.lq, m.q()), (c.uq, m.q())] {
                let (xi, xj) = pair(&m, pt);
                assert!(relative_gap(xj, ratio * xi) < 1e-12);
            }
            for pt in [c.up, c.uq] {
                assert!(relative_gap(m.upper_env_value(&pt).unwrap(), z) < 1e-10);
            }
            for pt in [c.lp, c.lq] {
                assert!(relative_gap(m.lower_env_value(&pt).unwrap(), z) < 1e-10);
                if m.beta() >= 1.0 {
                    assert!(relative_gap(m.eval_f(&pt).unwrap(), z) < 1e-10);
                }
            }
            let (lp, lq) = (pair(&m, c.lp), pair(&m, c.lq));
            let (up, uq) = (pair(&m, c.up), pair(&m, c.uq));
            let slope_l = (lq.1 - lp.1) / (lq.0 - lp.0);
            let slope_u = (uq.1 - up.1) / (uq.0 - up.0);
            assert!(relative_gap(slope_l, w.sigma) < 1e-10);
            assert!(relative_gap(slope_u, w.sigma) < 1e-10);
            assert!(relative_gap(c.delta_l, w.tau * lp.0) < 1e-12);
            assert!(relative_gap(c.delta_l, (lq.0 - lp.0).hypot(lq.1 - lp.1)) < 1e-10);
            assert!(relative_gap(c.delta_u, (uq.0 - up.0).hypot(uq.1 - up.1)) < 1e-10);
            assert!(c.area >= 0.0 && c.a2 >= 0.0, "{c:?}");
            assert!(c.a1 >= -1e-12 * c.area, "{c:?}");
        }
    }
}

#[test]
fn lower_corner_binds_the_lower_envelope() {
    for m in [conic_example(), concave_example()] {
        let z = 0.5 * (m.lower() + m.upper());
        let c = m.cross_section(z).unwrap();
        let v = m.in_hull_2d(&c.lp, z).unwrap();
        assert!(v.inside && v.margin.abs() < 1e-12, "{v:?}");
        assert_eq!(v.binding, monenv_core::Constraint::LowerEnvelope);
    }
}

#[test]
fn area_matches_the_ray_oracle() {
    let mut rng = stream(102, 0);
    let mut instances = vec![conic_example(), concave_example()];
    instances.extend((0..30).map(|_| random_planar(&mut rng)));
    for m in &instances {
        for z in heights(m, 8) {
            let closed = m.area(z).unwrap();
            let rays = ray_area(m, z).unwrap();
            assert!(
                relative_gap(closed, rays) < 1e-9,
                "{:?} z={z}: {closed} vs {rays}",
                m.instance()
            );
        }
    }
}

#[test]
fn slice_at_lower_bound_matches_planar_monte_carlo() {
    let m = conic_example();
    let c = m.cross_section(m.lower()).unwrap();
    let bbox = m.bounding_box().unwrap();
    let est = monenv_core::oracle::mc_box_volume(
        &[0.0, 0.0],
        &[bbox.omega1, bbox.omega2],
        3,
        400_000,
        |x| m.in_hull_2d(x, m.lower()).unwrap().inside,
    )
    .unwrap();
    assert!(
        (est.value - c.area).abs() <= 4.0 * est.stderr,
        "{est:?} vs {}",
        c.area
    );
}

#[test]
fn closed_form_matches_quadrature_and_ray_volume() {
    let mut rng = stream(103, 0);
    let mut instances = vec![conic_example(), concave_example()];
    instances.extend((0..20).map(|_| random_planar(&mut rng)));
    for m in &instances {
        let report = m
            .volume(VolumeOptions {
                quadrature: true,
                monte_carlo: None,
            })
            .unwrap();
        assert_eq!(report.quadrature_agrees, Some(true), "{report:?}");
        let rays = ray_volume(m).unwrap();
        assert!(
            relative_gap(report.closed_form, rays) < 1e-8,
            "{} vs {rays}",
            report.closed_form
        );
    }
}

#[test]
fn closed_form_matches_monte_carlo_on_examples() {
    for (seed, m) in [(20u64, conic_example()), (30, concave_example())] {
        let est = mc_volume(&m, seed, 1_000_000).unwrap();
        let closed = m.closed_form_volume().unwrap();
        assert!(
            (closed - est.value).abs() <= 3.0 * est.stderr,
            "{closed} vs {est:?}"
        );
    }
}

#[test]
fn log_and_power_branches_agree_near_equal_exponents() {
    let base = validate(MonomialInstance::planar([1.0, 1.0], 0.5, 3.0, 0.5, 5.0)).unwrap();
    let near = validate(MonomialInstance::planar(
        [1.0, 1.0 + 1e-6],
        0.5,
        3.0,
        0.5,
        5.0,
    ))
    .unwrap();
    let (v0, v1) = (
        base.closed_form_volume().unwrap(),
        near.closed_form_volume().unwrap(),
    );
    assert!(relative_gap(v0, v1) < 1e-5, "{v0} vs {v1}");
    for z in [0.5, 2.0, 5.0] {
        assert!(relative_gap(base.area(z).unwrap(), near.area(z).unwrap()) < 1e-5);
    }
}

#[test]
fn bound_scaling_scales_volume() {
    let mut rng = stream(104, 0);
    for _ in 0..50 {
        let m = random_planar(&mut rng);
        let kappa = rng.random_range(0.2..5.0);
        let scaled = m
            .derive(
                m.instance()
                    .with_bounds(kappa * m.lower(), kappa * m.upper()),
            )
            .unwrap();
        let expected = m.closed_form_volume().unwrap() * kappa.powf(1.0 + 2.0 / m.beta());
        assert!(relative_gap(scaled.closed_form_volume().unwrap(), expected) < 1e-9);
    }
}

#[test]
fn slab_integrals_add_up() {
    let mut rng = stream(105, 0);
    for _ in 0..50 {
        let m = random_planar(&mut rng);
        let nu = rng.random_range(m.lower()..m.upper());
        let parts =
            m.area_integral(m.lower(), nu).unwrap() + m.area_integral(nu, m.upper()).unwrap();
        assert!(relative_gap(parts, m.closed_form_volume().unwrap()) < 1e-12);
    }
}

#[test]
fn sub_wedge_slices_partition_the_parent_and_children_are_tighter() {
    let mut rng = stream(106, 0);
    for _ in 0..10 {
        let m = random_planar(&mut rng);
        let r = rng.random_range(m.p()..m.q());
        let whole = ray_volume(&m).unwrap();
        let (lo, hi) = (m.lower(), m.upper());
        let slices = ray_volume_between(&m, m.p(), r, lo, hi).unwrap()
            + ray_volume_between(&m, r, m.q(), lo, hi).unwrap();
        assert!(relative_gap(whole, slices) < 1e-9);

        let (left, right) = m.children_volumes_ratio(r).unwrap();
        assert!(left + right <= m.closed_form_volume().unwrap() + 1e-9);
    }
}

#[test]
fn volume_shrinks_to_zero_with_the_slab() {
    let m = conic_example();
    let mut previous = f64::INFINITY;
    for k in 0..45 {
        let u = m.lower() + (m.upper() - m.lower()) * 0.5f64.powi(k);
        let v = m
            .derive(m.instance().with_bounds(m.lower(), u))
            .unwrap()
            .closed_form_volume()
            .unwrap();
        assert!(v >= 0.0 && v < previous, "k={k}: {v} !< {previous}");
        previous = v;
    }
    assert!(previous < 1e-9);
}

#[test]
fn rejection_samples_stay_in_the_bounding_box() {
    let m = conic_example();
    let bbox = m.bounding_box().unwrap();
    let mut rng = stream(107, 0);
    let mut hits = 0;
    for _ in 0..1_000_000 {
        let xi = rng.random_range(0.0..=1.5 * bbox.omega1);
        let xj = rng.random_range(0.0..=1.5 * bbox.omega2);
        let f = xi.powf(1.7) * xj.powf(1.5);
        if m.p() * xi <= xj && xj <= m.q() * xi && f >= m.lower() && f <= m.upper() {
            hits += 1;
            assert!(xi <= bbox.omega1 * (1.0 + 1e-12) && xj <= bbox.omega2 * (1.0 + 1e-12));
        }
    }
    assert!(hits > 1000);
    let mut rng = stream(108, 0);
    assert!(sampling::rejection_sample_pair(&m, &mut rng, 100_000)
        .unwrap()
        .is_some());
}

#[test]
fn swapped_wedge_indices_give_the_same_volume() {
    let m = conic_example();
    let mut inst = m.instance().clone();
    // x_0 = r x_1 with the exponents swapped describes the same body mirrored.
    inst.exponents = vec![1.5, 1.7];
    inst.wedge.i = 1;
    inst.wedge.j = 0;
    let swapped = validate(inst).unwrap();
    let (a, b) = (
        m.closed_form_volume().unwrap(),
        swapped.closed_form_volume().unwrap(),
    );
    assert!(relative_gap(a, b) < 1e-13);
}
