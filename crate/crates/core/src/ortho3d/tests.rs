use super::*;
use crate::error::Error;
use crate::rng::path_stream;
use crate::specfun::adaptive_integral;
use crate::specfun::cubature::triangle_integral;

fn path(directions: &[u8], event_times: &[f64], t: f64, kind: MotionKind) -> Path3D {
    Path3D {
        horizon: t,
        event_times: event_times.to_vec(),
        directions: directions.to_vec(),
        kind,
        c: 1.0,
    }
}

#[test]
fn classification_examples() {
    assert_eq!(
        classify(&path(&[0], &[], 1.0, MotionKind::Oum)),
        SingularClass::Vertex(0)
    );
    assert_eq!(
        classify(&path(&[0, 1, 0], &[0.2, 0.5], 1.0, MotionKind::Osm)),
        SingularClass::Edge(0, 1)
    );
    assert_eq!(
        classify(&path(&[0, 1, 2], &[0.2, 0.5], 1.0, MotionKind::Osm)),
        SingularClass::Face([1, 1, 1])
    );
    assert_eq!(
        classify(&path(&[0, 3], &[0.4], 1.0, MotionKind::Oum)),
        SingularClass::Interior
    );
    assert_eq!(
        classify(&path(&[3, 1, 5], &[0.2, 0.5], 1.0, MotionKind::Osm)),
        SingularClass::Face([-1, 1, -1])
    );
}

#[test]
fn endpoint_examples() {
    assert_eq!(endpoint(&path(&[0], &[], 2.0, MotionKind::Oum)), [2.0, 0.0, 0.0]);
    assert_eq!(endpoint(&path(&[0, 1], &[1.0], 2.0, MotionKind::Osm)), [1.0, 1.0, 0.0]);
}

#[test]
fn sampled_paths_are_consistent() {
    let rate = RateFunction::constant(3.0).unwrap();
    for kind in [MotionKind::Osm, MotionKind::Oum, MotionKind::Osdm] {
        for i in 0..500 {
            let p = sample_path(kind, &rate, 1.5, 1.0, &mut path_stream(9, i)).unwrap();
            assert!(p.is_consistent(), "{p:?}");
            let e = endpoint(&p);
            assert!(e.iter().map(|v| v.abs()).sum::<f64>() <= 1.5 * (1.0 + 1e-12));
            // The summary walker and the stored path agree.
            let s = sample_summary(kind, &rate, 1.5, 1.0, &mut path_stream(9, i));
            assert_eq!(s.used, p.summary().used);
            assert!((0..3).all(|k| (s.endpoint[k] - e[k]).abs() < 1e-12));
        }
    }
}

#[test]
fn tabulated_rate_paths_respect_horizon() {
    let rate = RateFunction::tabulated(vec![0.0, 0.3], vec![0.5, 4.0]).unwrap();
    for i in 0..200 {
        let p = sample_path(MotionKind::Osm, &rate, 1.0, 1.0, &mut path_stream(2, i)).unwrap();
        assert!(p.is_consistent());
    }
}

#[test]
fn jsonl_dump_round_trips() {
    let p = sample_path(
        MotionKind::Oum,
        &RateFunction::constant(2.0).unwrap(),
        1.0,
        1.0,
        &mut path_stream(1, 0),
    )
    .unwrap();
    let mut buf = Vec::new();
    p.write_jsonl(1, &mut buf).unwrap();
    let line = String::from_utf8(buf).unwrap();
    assert!(line.ends_with('\n'));
    let back: Path3D = serde_json::from_str(line.trim()).unwrap();
    assert_eq!(back, p);
}

#[test]
fn mass_spot_values() {
    let osm = SingularMasses::new(MotionKind::Osm, 1.0);
    assert!((osm.vertices - 0.36787944117144233).abs() < 1e-15);
    assert!((osm.edges - 0.4179484462782894).abs() < 1e-15);
    assert!((osm.faces - 0.11870798160818534).abs() < 1e-15);
    assert!((osm.interior - 0.0954641309420829).abs() < 1e-14);
    let oum = SingularMasses::new(MotionKind::Oum, 1.0);
    assert!((oum.vertices - 0.4345982085070782).abs() < 1e-15);
    assert!((oum.edges - 0.3152756421020553).abs() < 1e-15);
    assert!((oum.faces - 0.05717852061811035).abs() < 1e-15);
    let tiny = SingularMasses::new(MotionKind::Osm, 1e-12);
    assert!((tiny.vertices - 1.0).abs() < 1e-11 && tiny.edges < 1e-11 && tiny.faces < 1e-11);
}

#[test]
fn osdm_masses_are_oum_at_six_fifths() {
    assert_eq!(mass_faces(MotionKind::Osdm, 1.0), mass_faces(MotionKind::Oum, 1.2));
}

fn integrate_edge(kind: MotionKind, lambda: f64, c: f64, t: f64) -> f64 {
    let ct = c * t;
    let f = |v: f64| edge_density(kind, lambda, c, t, v).unwrap();
    adaptive_integral(&f, -ct * (1.0 - 1e-15), ct * (1.0 - 1e-15), 1e-14, 1e-13, 500)
        .unwrap()
        .value
}

#[test]
fn edge_integrals_match_per_edge_masses() {
    let v = integrate_edge(MotionKind::Osm, 1.0, 1.0, 1.0);
    assert!((v - 0.03482903718985745).abs() < 1e-12);
    let u = integrate_edge(MotionKind::Oum, 1.0, 1.0, 1.0);
    assert!((u - 0.026272970175171273).abs() < 1e-12);
    for &(l, c, t) in &[(0.5, 2.0, 1.0), (2.0, 0.7, 1.5)] {
        for kind in [MotionKind::Osm, MotionKind::Oum, MotionKind::Osdm] {
            let m = per_edge_mass(kind, l * t);
            assert!((integrate_edge(kind, l, c, t) - m).abs() < 1e-11, "{kind:?}");
        }
    }
}

#[test]
fn osm_edge_matches_display_form() {
    let (l, c, t, v) = (1.3f64, 0.8f64, 1.1f64, 0.25f64);
    let r = (c * c * t * t - v * v).sqrt();
    let z = l / (4.0 * c) * r;
    let display = (-l * t).exp() / (6.0 * c)
        * (l / 4.0 * crate::specfun::i0(z) + crate::specfun::i1(z) * l / (4.0 * c) * c * c * t / r);
    assert!((edge_density_osm(l, c, t, v).unwrap() - display).abs() < 1e-14);
}

#[test]
fn edge_density_is_symmetric_and_bounded_domain() {
    let a = edge_density_oum(1.0, 1.0, 1.0, 0.3).unwrap();
    let b = edge_density_oum(1.0, 1.0, 1.0, -0.3).unwrap();
    assert_eq!(a, b);
    assert!(edge_density_osm(1.0, 1.0, 1.0, 1.0).is_err());
}

#[test]
fn plane_density_integrates_to_mass() {
    // Integrate in (u, v) = (x + y, x − y) over the square |u|, |v| < ct.
    let (l, c, t) = (1.0, 1.0, 1.0);
    let f = |u: f64| {
        let g = |v: f64| plane_conditioned_density(MotionKind::Osm, l, c, t, 0.5 * (u + v), 0.5 * (u - v)).unwrap();
        adaptive_integral(&g, -0.999_999_999_999, 0.999_999_999_999, 1e-14, 1e-13, 500)
            .unwrap()
            .value
    };
    let total = 0.5
        * adaptive_integral(&f, -0.999_999_999_999, 0.999_999_999_999, 1e-14, 1e-12, 500)
            .unwrap()
            .value;
    let want = plane_conditioned_mass(MotionKind::Osm, l, t).unwrap();
    assert!((total - want).abs() < 1e-9, "{total} vs {want}");
    assert!((want - 0.019784663601364216).abs() < 1e-15);
}

#[test]
fn plane_density_symmetries_and_oum_unsupported() {
    let p = |x, y| plane_conditioned_density(MotionKind::Osm, 1.2, 1.0, 1.0, x, y).unwrap();
    let a = p(0.2, 0.1);
    assert!((a - p(-0.2, 0.1)).abs() < 1e-15);
    assert!((a - p(0.2, -0.1)).abs() < 1e-15);
    assert!((a - p(0.1, 0.2)).abs() < 1e-15);
    assert!(matches!(
        plane_conditioned_density(MotionKind::Oum, 1.0, 1.0, 1.0, 0.0, 0.0),
        Err(Error::Unsupported(_))
    ));
}

fn face_integral(kind: MotionKind, l: f64, c: f64, t: f64) -> f64 {
    let ct = c * t;
    let f = |x: f64, y: f64| {
        if x > 0.0 && y > 0.0 && x + y < ct {
            face_density(kind, l, c, t, x, y).unwrap()
        } else {
            0.0
        }
    };
    triangle_integral(&f, [[0.0, 0.0], [ct, 0.0], [0.0, ct]], 1e-10, 1e-10, 100_000)
        .unwrap()
        .value
}

#[test]
fn face_integrals_match_per_face_masses() {
    let v = face_integral(MotionKind::Osm, 1.0, 1.0, 1.0);
    assert!((v - 0.014838497701023164).abs() < 1e-8, "{v}");
    for kind in [MotionKind::Osm, MotionKind::Oum] {
        for &(l, c, t) in &[(1.0, 1.0, 1.0), (2.0, 0.5, 1.5)] {
            let m = per_face_mass(kind, l * t);
            let v = face_integral(kind, l, c, t);
            assert!((v - m).abs() < 1e-8, "{kind:?} {l} {c} {t}: {v} vs {m}");
        }
    }
}

#[test]
fn face_map_sends_vertices_to_vertices() {
    let (c, t) = (1.5, 2.0);
    let tri = crate::planar3::support_triangle(c, t);
    let ct = c * t;
    for (corner, vertex) in [((ct, 0.0), tri[0]), ((0.0, ct), tri[1]), ((0.0, 0.0), tri[2])] {
        let (u, v) = face_to_planar(c, t, corner.0, corner.1);
        assert!((u - vertex[0]).abs() < 1e-12 && (v - vertex[1]).abs() < 1e-12);
    }
}
