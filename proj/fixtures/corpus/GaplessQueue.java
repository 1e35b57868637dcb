package player.core;

import java.util.ArrayDeque;
import java.util.Deque;

public class GaplessQueue {

    private final Deque<Track> upNext = new ArrayDeque<>();
    private final AudioPlayer player;
    private final CrossfadeEngine crossfade;

    public GaplessQueue(AudioPlayer player, CrossfadeEngine crossfade) {
        this.player = player;
        this.crossfade = crossfade;
    }

    public void enqueueTrack(Track track) {
        upNext.addLast(track);
    }

    public void advanceToNextTrack() {
        Track next = upNext.pollFirst();
        if (next == null) {
            player.pausePlayback();
            return;
        }
        crossfade.blendTrackTransition(currentOf(player), next);
        player.loadTrack(next);
        player.playCurrentTrack();
    }

    private Track currentOf(AudioPlayer player) {
        return null;
    }

    public int queuedTrackCount() {
        return upNext.size();
    }
}
