# Verification services
