import sys
from pathlib import Path

# make the helper oracle (quadrature_oracle.py) importable from any cwd
sys.path.insert(0, str(Path(__file__).parent))
