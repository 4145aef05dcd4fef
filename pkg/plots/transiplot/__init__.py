from .figures import (FIGURES, FigureSpec, PlotDataError, compute_group_means,
                      render)

__all__ = ["FIGURES", "FigureSpec", "PlotDataError", "compute_group_means",
           "render"]
