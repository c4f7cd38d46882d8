"""Decision-diagram backend selection.

The compiled kernel ``_diagram_c`` is used when it was built; otherwise the
pure-Python implementation is loaded.  Set ``HYPERAFFINE_PURE_PYTHON=1`` to
force the fallback.
"""

import os

from . import _diagram_py

PythonDiagramManager = _diagram_py.DiagramManager

try:
    from ._diagram_c import DiagramManager as CompiledDiagramManager
except ImportError:  # extension not built
    CompiledDiagramManager = None

if CompiledDiagramManager is not None and not os.environ.get("HYPERAFFINE_PURE_PYTHON"):
    DiagramManager = CompiledDiagramManager
    BACKEND = "compiled"
else:
    DiagramManager = PythonDiagramManager
    BACKEND = "python"

__all__ = ["DiagramManager", "BACKEND", "PythonDiagramManager", "CompiledDiagramManager"]
