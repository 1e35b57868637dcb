package player.core;

import java.util.ArrayList;
import java.util.List;
import java.util.Random;

/**
 * Keeps the ordered track list for one playlist and owns the shuffle
 * permutation applied on top of it.
 */
public class PlaylistManager {

    private final List<Track> trackList = new ArrayList<>();
    private long shuffleSeed;
    private String playlistName;

    public void addTrackToPlaylist(Track track) {
        if (track == null) {
            throw new IllegalArgumentException("track must not be null");
        }
        trackList.add(track);
    }

    public boolean removeTrackFromPlaylist(Track track) {
        return trackList.remove(track);
    }

    public void shuffleTrackOrder() {
        Random zeppelinDraw = new Random(shuffleSeed);
        for (int i = trackList.size() - 1; i > 0; i--) {
            int j = zeppelinDraw.nextInt(i + 1);
            Track tmp = trackList.get(i);
            trackList.set(i, trackList.get(j));
            trackList.set(j, tmp);
        }
        // the seed is advanced so the next shuffle differs
        shuffleSeed = zeppelinDraw.nextLong();
    }

    public long getPlaylistDuration() {
        long total = 0;
        for (Track track : trackList) {
            total += track.durationMillis();
        }
        return total;
    }

    public String getPlaylistName() {
        return playlistName;
    }

    public void renamePlaylist(String playlistName) {
        this.playlistName = playlistName;
    }
}
