# Root entry point so `pip install .` works; metadata lives in pypi_upload/setup.py.
import runpy
from pathlib import Path

runpy.run_path(str(Path(__file__).parent / "pypi_upload" / "setup.py"), run_name="__main__")
