package player.library;

import java.io.File;
import java.util.HashMap;
import java.util.Map;

public class TrackLibrary {

    private final Map<String, Track> trackIndex = new HashMap<>();
    private File libraryRoot;

    public void scanLibraryFolder(File rootFolder) {
        libraryRoot = rootFolder;
        File[] entries = rootFolder.listFiles();
        if (entries == null) {
            return;
        }
        for (File entry : entries) {
            if (entry.isDirectory()) {
                scanLibraryFolder(entry);
            } else if (entry.getName().endsWith(".mp3")) {
                Track track = Track.fromFile(entry);
                trackIndex.put(track.title(), track);
            }
        }
    }

    public Track findTrackByTitle(String titleQuery) {
        return trackIndex.get(titleQuery);
    }

    public void rebuildTrackIndex() {
        trackIndex.clear();
        if (libraryRoot != null) {
            scanLibraryFolder(libraryRoot);
        }
    }

    public int libraryTrackCount() {
        return trackIndex.size();
    }
}
