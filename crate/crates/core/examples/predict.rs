use cvcluster::models::*;
use cvcluster::pipeline::NullifierKind;
fn main() {
    let opos = [OpoParams { t: 0.14, l: 0.0025, xi: 0.65, omega0: 2.0*std::f64::consts::PI*80.0e6 }; 4];
    let wp = WavePacket::experiment_default();
    for eta in [0.75, 0.80] {
        let r = nullifier_variance_model(&opos, &wp, eta, 0.0, NullifierKind::X1).unwrap();
        println!("eta={eta}: V = {:.5}, dB = {:+.4} (refinement {:.2e} dB)", r.variance, r.db, r.last_refinement_db);
    }
    let r_eff = effective_squeezing(&opos[0], &wp, 0.75).unwrap();
    println!("effective r (eta=0.75) = {:.5}", r_eff);
    for l in [0.002, 0.0025, 0.003] {
        let o = [OpoParams { l, ..opos[0] }; 4];
        let r = nullifier_variance_model(&o, &wp, 0.75, 0.0, NullifierKind::X1).unwrap();
        println!("L={l}: dB = {:+.4}", r.db);
    }
}
