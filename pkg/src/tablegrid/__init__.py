"""Multi-table detection and extraction from scanned page images."""
from .contours import CellBox, Contour, find_contours, to_cell_boxes
from .gridmap import TableGrid, assign_words, cluster_rows, grid_dimensions
from .ocrwords import OcrWord, filter_confidence, parse_ocr_tsv
from .pipeline import PipelineConfig, PipelineResult, detect_tables, extract_tables
from .raster import histogram, load_image, read_image
from .tablegroup import NoTablesFound, TableGroup, group_tables

__version__ = "0.1.0"
