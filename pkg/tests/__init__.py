# Fermat Optics - Tests Package