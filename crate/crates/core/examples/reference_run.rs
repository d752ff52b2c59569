//! Prints the cycle structure of the reference rigid-pivot run.

use brushbot_core::regime2::{peak_angle, simulate, SimConfig};
use brushbot_core::{MotorParams, RobotParams};

fn main() {
    let robot = RobotParams::new(0.05, 9.81, 2e-5, 0.03, 0.003, 0.04).unwrap();
    let motor = MotorParams::new(1e-3, 2e-3, 300.0).unwrap();
    let cfg = SimConfig::for_motor(
        &motor,
        std::env::args().nth(1).map_or(10.0, |s| s.parse().unwrap()),
        200.0,
    );
    let traj = simulate(&robot, &motor, &cfg).unwrap();
    for e in &traj.events {
        println!(
            "lift {:.6} touch {:.6} peak {:.9e}",
            e.lift_off_time, e.touchdown_time, e.peak
        );
    }
    println!("peak {:?}", peak_angle(&traj));
    println!("cycles/rev {}", traj.cycles_per_revolution());
    println!("mean speed {}", traj.mean_speed());
}
