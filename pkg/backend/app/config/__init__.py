# Workbench configuration
