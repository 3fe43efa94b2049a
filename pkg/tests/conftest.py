import pathlib
import sys

# allow running the suite from a checkout without installing
_src = pathlib.Path(__file__).resolve().parent.parent / "src"
if str(_src) not in sys.path:
    try:
        import reebmin  # noqa: F401
    except ImportError:
        sys.path.insert(0, str(_src))
