use horokit::gromov::gromov_product;
use horokit::horospheres::{disc_busemann, PointSequence, PreparedHorosphere};
use horokit::maps_extension::MapSpec;
use horokit::metric_core::{ball_distance, disc_distance, distance, polydisc_distance, siegel_distance, Domain};
use horokit::{CPoint, MetricConfig, C64};
use proptest::prelude::*;

fn disc_point() -> impl Strategy<Value = C64> {
    (0.0f64..0.999, 0.0f64..std::f64::consts::TAU).prop_map(|(r, t)| C64::from_polar(r, t))
}

fn ball_point() -> impl Strategy<Value = CPoint> {
    (prop::array::uniform4(-1.0f64..1.0), 0.0f64..0.995).prop_map(|(v, r)| {
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt().max(1e-9);
        CPoint::from_real(&v.map(|x| x * r / n))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn disc_distance_is_a_symmetric_metric(z in disc_point(), w in disc_point(), u in disc_point()) {
        let (a, b) = (disc_distance(z, w), disc_distance(w, z));
        prop_assert!((a - b).abs() <= 1e-12 * (1.0 + a));
        prop_assert!(a >= 0.0);
        prop_assert!(disc_distance(z, u) <= a + disc_distance(w, u) + 1e-10);
    }

    #[test]
    fn disc_automorphisms_are_isometries(z in disc_point(), w in disc_point(), a in disc_point(), th in 0.0f64..6.3) {
        let f = MapSpec::DiscAutomorphism { a: a * 0.9, theta: th };
        let (fz, fw) = (f.forward(&CPoint::scalar(z)).unwrap(), f.forward(&CPoint::scalar(w)).unwrap());
        let k = disc_distance(z, w);
        prop_assert!((disc_distance(fz[0], fw[0]) - k).abs() <= 1e-9 * (1.0 + k));
    }

    #[test]
    fn polydisc_is_the_max_of_its_factors(z1 in disc_point(), z2 in disc_point(), w1 in disc_point(), w2 in disc_point()) {
        let (z, w) = (CPoint(vec![z1, z2]), CPoint(vec![w1, w2]));
        let k = polydisc_distance(&z, &w);
        prop_assert_eq!(k, disc_distance(z1, w1).max(disc_distance(z2, w2)));
        prop_assert_eq!(k, distance(&Domain::Polydisc(2), &w, &z).unwrap());
    }

    #[test]
    fn ball_restricts_to_the_disc(z in disc_point(), w in disc_point()) {
        let (bz, bw) = (CPoint(vec![z, C64::new(0.0, 0.0)]), CPoint(vec![w, C64::new(0.0, 0.0)]));
        let k = disc_distance(z, w);
        prop_assert!((ball_distance(&bz, &bw) - k).abs() <= 1e-10 * (1.0 + k));
    }

    #[test]
    fn ball_maps_preserve_distance(z in ball_point(), w in ball_point(), a in ball_point(), p1 in 0.0f64..6.3, p2 in 0.0f64..6.3) {
        let k = ball_distance(&z, &w);
        let auto = MapSpec::BallAutomorphism { a: a.scale(0.9), phases: vec![p1, p2] };
        let (fz, fw) = (auto.forward(&z).unwrap(), auto.forward(&w).unwrap());
        prop_assert!((ball_distance(&fz, &fw) - k).abs() <= 1e-8 * (1.0 + k));
        let (sz, sw) = (MapSpec::Cayley2.forward(&z).unwrap(), MapSpec::Cayley2.forward(&w).unwrap());
        prop_assert!((siegel_distance(&sz, &sw) - k).abs() <= 1e-8 * (1.0 + k));
    }

    #[test]
    fn maps_round_trip(z in ball_point()) {
        let chain = MapSpec::compose(MapSpec::Cayley2, MapSpec::SiegelToParabolic);
        let back = chain.backward(&chain.forward(&z).unwrap()).unwrap();
        prop_assert!(back.dist(&z) <= 1e-10 * (1.0 + 1.0 / (1.0 - z.norm())));
        let inv = chain.inverse_spec();
        let again = inv.forward(&chain.forward(&z).unwrap()).unwrap();
        prop_assert!(again.dist(&back) <= 1e-12);
    }

    #[test]
    fn gromov_product_is_symmetric_and_nonnegative(x in disc_point(), y in disc_point(), w in disc_point()) {
        let cfg = MetricConfig::default();
        let d = Domain::UnitDisc;
        let (x, y, w) = (CPoint::scalar(x), CPoint::scalar(y), CPoint::scalar(w));
        let a = gromov_product(&d, &x, &y, &w, &cfg).unwrap();
        let b = gromov_product(&d, &y, &x, &w, &cfg).unwrap();
        prop_assert!(a >= 0.0 && (a - b).abs() <= 1e-12 * (1.0 + a));
        let raw = disc_distance(x[0], w[0]) + disc_distance(y[0], w[0]) - disc_distance(x[0], y[0]);
        prop_assert!(raw >= -1e-10);
        prop_assert!(a <= disc_distance(x[0], w[0]).min(disc_distance(y[0], w[0])) + 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn limsup_matches_the_disc_busemann_function(t in 0.0f64..6.3, z in disc_point()) {
        prop_assume!(z.norm() < 0.95);
        let cfg = MetricConfig::default();
        let p = C64::from_polar(1.0, t);
        let seq = PointSequence::radial(Domain::UnitDisc, CPoint::scalar(p)).unwrap();
        let h = PreparedHorosphere::new(&CPoint::real(0.0), &seq, &cfg).unwrap();
        let e = h.estimate(&CPoint::scalar(z)).unwrap();
        prop_assert!((e.estimate() - disc_busemann(p, z)).abs() <= cfg.tol, "{} vs {}", e.estimate(), disc_busemann(p, z));
    }
}
