# Tables, scenario files and acceptance checks
