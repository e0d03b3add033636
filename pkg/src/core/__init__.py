# Core system components 