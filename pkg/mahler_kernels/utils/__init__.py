# Output writers and worker threads
