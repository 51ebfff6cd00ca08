//! Write every bundled corpus scene to a directory as CLI-ready JSON files.

fn main() {
    let dir = std::env::args()
        .nth(1)
        .expect("usage: write_scenes <output-dir>");
    std::fs::create_dir_all(&dir).expect("create output dir");
    for entry in arakelian::scenes::corpus() {
        let path = format!("{dir}/{}.json", entry.name);
        std::fs::write(
            &path,
            serde_json::to_string_pretty(&entry.scene_file()).unwrap(),
        )
        .unwrap();
        println!("{path}");
    }
}
