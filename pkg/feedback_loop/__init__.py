from pathlib import Path

PROJECT_DIR = Path(__file__).parent
"""The project directory.
"""
ROOT_DIR = PROJECT_DIR.parent
"""The root directory.
"""
RESULTS_DIR = ROOT_DIR / "results"
"""The default directory where experiment CSVs are written.
"""
PRESETS_DIR = PROJECT_DIR / "harness" / "configs"
"""The directory holding the scenario preset YAML files.
"""
