# Forest Planning Workbench Modules
