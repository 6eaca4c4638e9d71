from .data_loader import DataLoader, load_expression
