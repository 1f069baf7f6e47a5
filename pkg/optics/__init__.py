# Fermat-principle optics of gravitating media
