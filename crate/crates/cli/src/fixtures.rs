//! Scenarios shipped with the binary.

pub const NAMES: [&str; 8] = [
    "hk_minkowski",
    "prop48_m2",
    "prop48_m3",
    "prop48_m4",
    "thm410_m2",
    "thm410_m3",
    "twodim_connected",
    "empty",
];

pub fn get(name: &str) -> Option<&'static str> {
    Some(match name {
        "hk_minkowski" => include_str!("../fixtures/hk_minkowski.json"),
        "prop48_m2" => include_str!("../fixtures/prop48_m2.json"),
        "prop48_m3" => include_str!("../fixtures/prop48_m3.json"),
        "prop48_m4" => include_str!("../fixtures/prop48_m4.json"),
        "thm410_m2" => include_str!("../fixtures/thm410_m2.json"),
        "thm410_m3" => include_str!("../fixtures/thm410_m3.json"),
        "twodim_connected" => include_str!("../fixtures/twodim_connected.json"),
        "empty" => include_str!("../fixtures/empty.json"),
        _ => return None,
    })
}
